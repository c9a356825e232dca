#include <doctest.h>

#include "matheval/normalize.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace matheval;
using namespace matheval::answers;

namespace {

std::string unescape(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            char c = s[++i];
            out.push_back(c == 'n' ? '\n' : c == 't' ? '\t' : c == 'r' ? '\r' : c);
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

struct Vector3 {
    std::string input, once, twice;
};

std::vector<Vector3> load_vectors() {
    std::ifstream in(std::string(MATHEVAL_FIXTURE_DIR) + "/normalize_vectors.txt");
    REQUIRE(in.good());
    std::vector<Vector3> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = line.find('\t', t1 + 1);
        REQUIRE(t1 != std::string::npos);
        REQUIRE(t2 != std::string::npos);
        out.push_back({unescape(line.substr(0, t1)), unescape(line.substr(t1 + 1, t2 - t1 - 1)),
                       unescape(line.substr(t2 + 1))});
    }
    return out;
}

}  // namespace

TEST_CASE("frozen normalization vectors are byte-identical, including composition") {
    std::vector<Vector3> vectors = load_vectors();
    REQUIRE(vectors.size() >= 200);
    for (const auto& v : vectors) {
        CAPTURE(v.input);
        std::string once = normalize_final_answer(v.input);
        CHECK(once == v.once);
        CHECK(normalize_final_answer(once) == v.twice);
    }
}

TEST_CASE("builtin tables match the shipped data file") {
    std::ifstream in(std::string(MATHEVAL_DATA_DIR) + "/normalization_tables.txt");
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == builtin_tables_text());
    const NormalizationTables& t = NormalizationTables::builtin();
    CHECK(t.version == 1);
    REQUIRE(t.substitutions.size() == 10);
    CHECK(t.substitutions[0].first == "an ");  // order is load-bearing
    CHECK(t.substitutions[1].first == "a ");
    CHECK(t.removals.size() == 42);
    CHECK(t.units.size() == 20);
    CHECK(t.maybe_units.size() == 3);
}

TEST_CASE("MathStyle extraction uses the last marker") {
    std::string completion =
        "Problem: ... Final Answer: The final answer is $1$. I hope it is correct.\n"
        "Solution: ... Final Answer: The final answer is $16$. I hope it is correct.";
    auto ans = extract_final_answer(completion, AnswerStyle::MathStyle);
    REQUIRE(ans.has_value());
    CHECK(*ans == "$16$");
    CHECK_FALSE(extract_final_answer("The answer is 7", AnswerStyle::MathStyle).has_value());
    // marker without the closing phrase does not extract
    CHECK_FALSE(extract_final_answer("The final answer is 12", AnswerStyle::MathStyle).has_value());
}

TEST_CASE("OcwStyle extraction follows the original grader procedure") {
    auto ans = extract_final_answer(
        "Reasoning here.\nFinal answer: The final answer is +2. I hope it is correct.",
        AnswerStyle::OcwStyle);
    REQUIRE(ans.has_value());
    CHECK(*ans == "+2");
    // trailing periods scrub
    auto a2 = extract_final_answer("Final answer: The final answer is 3.2. I hope it is correct",
                                   AnswerStyle::OcwStyle);
    REQUIRE(a2.has_value());
    CHECK(*a2 == "3.2");
    CHECK_FALSE(extract_final_answer("no marker at all", AnswerStyle::OcwStyle).has_value());
    // text after a second start marker is not part of the answer
    auto a3 = extract_final_answer(
        "Final answer: A. I hope it is correct. Final answer: B. I hope it is correct.",
        AnswerStyle::OcwStyle);
    REQUIRE(a3.has_value());
    CHECK(*a3 == "A");
}

TEST_CASE("marker round trip is the identity on answers") {
    std::mt19937_64 gen(17);
    const char* answers_pool[] = {"42", "\\frac{1}{2}", "x+y", "[2,5)", "-8\\sqrt{3}", "0.75"};
    for (int i = 0; i < 100; ++i) {
        std::string ans = answers_pool[gen() % 6];
        std::string completion = "Some working.\nFinal Answer: The final answer is " + ans +
                                 ". I hope it is correct.";
        auto back = extract_final_answer(completion, AnswerStyle::MathStyle);
        REQUIRE(back.has_value());
        CHECK(*back == ans);
    }
}

TEST_CASE("normalize_numeric strips units and evaluates") {
    CHECK(*normalize_numeric("3.2 \\mathrm{~kg} \\cdot \\mathrm{m} / \\mathrm{s}") ==
          doctest::Approx(3.2));
    CHECK(*normalize_numeric("$\\frac{3}{4}$") == doctest::Approx(0.75));
    CHECK(*normalize_numeric("3/4") == doctest::Approx(0.75));
    CHECK(*normalize_numeric("2**3") == doctest::Approx(8.0));
    CHECK(*normalize_numeric("13.6 eV") == doctest::Approx(13.6));
    CHECK(*normalize_numeric("3 \\cdot 10^{8}") == doctest::Approx(3e8));
    CHECK_FALSE(normalize_numeric("x+1").has_value());
    CHECK_FALSE(normalize_numeric("").has_value());
    CHECK_FALSE(normalize_numeric("1/0").has_value());
    CHECK_FALSE(normalize_numeric("10^{400}").has_value());  // double overflow -> none
    // never a value when free variables survive unit stripping
    const char* with_vars[] = {"2n", "x kg", "a+b", "q/2"};
    for (const char* s : with_vars) {
        CAPTURE(s);
        CHECK_FALSE(normalize_numeric(s).has_value());
    }
}

TEST_CASE("normalize_symbolic separates expressions from equations") {
    auto expr = normalize_symbolic("\\[s^{2}+b s+1\\]", SymbolicWant::Expression);
    REQUIRE(expr.has_value());
    CHECK(sym::free_variables(*expr) == std::set<std::string>{"s", "b"});

    auto eqn = normalize_symbolic("y = 4x - 10", SymbolicWant::Equation);
    REQUIRE(eqn.has_value());
    CHECK((*eqn)->kind == sym::Kind::Equation);

    CHECK_FALSE(normalize_symbolic("y = 4x - 10", SymbolicWant::Expression).has_value());
    CHECK_FALSE(normalize_symbolic("4x - 10", SymbolicWant::Equation).has_value());
    // degenerate ground relations yield none
    CHECK_FALSE(normalize_symbolic("1 = 2", SymbolicWant::Equation).has_value());
    CHECK_FALSE(normalize_symbolic("x = x", SymbolicWant::Equation).has_value());
    // wrapper scrubbing
    auto wrapped = normalize_symbolic("$\\left( x+1 \\right)$", SymbolicWant::Expression);
    REQUIRE(wrapped.has_value());
    CHECK_FALSE(normalize_symbolic("gibberish $$$ %", SymbolicWant::Expression).has_value());
}

TEST_CASE("a modified table version changes behavior, pinning the shipped one") {
    // same pipeline, one substitution dropped: 'an ' survives
    std::string text = builtin_tables_text();
    std::size_t at = text.find("an \t\n");
    REQUIRE(at != std::string::npos);
    std::string patched = text.substr(0, at) + text.substr(at + 4);
    NormalizationTables alt = NormalizationTables::parse(patched);
    CHECK(alt.substitutions.size() == 9);
    CHECK(normalize_final_answer("an apple", alt) != normalize_final_answer("an apple"));
    CHECK(normalize_final_answer("an apple") == "apple");
    CHECK_THROWS_AS(NormalizationTables::parse("no version here"), std::invalid_argument);
}
