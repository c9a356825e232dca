// Acceptance suite: one pass/fail line per criterion. Exit status is the
// number of failed criteria.

#include "equiv_corpus.hpp"
#include "matheval/corpus.hpp"
#include "matheval/grading.hpp"
#include "matheval/metrics.hpp"
#include "matheval/normalize.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using json = nlohmann::json;
using namespace matheval;

namespace {

const std::string kFixtures = MATHEVAL_FIXTURE_DIR;
const std::string kCli = MATHEVAL_CLI_PATH;

struct Outcome {
    bool pass;
    std::string detail;
};

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

std::string math_completion(const std::string& answer) {
    return "Step by step.\nFinal Answer: The final answer is " + answer +
           ". I hope it is correct.";
}

// ---- 1. normalization byte-oracle ----
Outcome normalization_oracle() {
    std::ifstream in(kFixtures + "/normalize_vectors.txt");
    if (!in.good()) return {false, "fixture missing"};
    std::size_t n = 0, bad = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = line.find('\t', t1 + 1);
        std::string input = unescape(line.substr(0, t1));
        std::string once = unescape(line.substr(t1 + 1, t2 - t1 - 1));
        std::string twice = unescape(line.substr(t2 + 1));
        std::string got = answers::normalize_final_answer(input);
        if (got != once || answers::normalize_final_answer(got) != twice) ++bad;
        ++n;
    }
    std::ostringstream d;
    d << n << " vectors, " << bad << " mismatches";
    return {n >= 200 && bad == 0, d.str()};
}

// ---- 2. OCW grading oracle ----
Outcome ocw_oracle() {
    std::ifstream in(kFixtures + "/ocw_grading_cases.jsonl");
    if (!in.good()) return {false, "fixture missing"};
    grading::GradingConfig cfg;
    std::size_t n = 0, bad = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        grading::OcwAnswerType type =
            j["type"] == "numeric"      ? grading::OcwAnswerType::Numeric
            : j["type"] == "expression" ? grading::OcwAnswerType::SymbolicExpression
                                        : grading::OcwAnswerType::SymbolicEquation;
        grading::GradeResult r = grading::grade_ocw({j["target"], type, j["completion"]}, cfg);
        std::string verdict = r.dataset_error ? "dataset_error"
                              : r.correct     ? "correct"
                                              : "incorrect";
        if (verdict != j["verdict"].get<std::string>()) ++bad;
        ++n;
    }
    std::ostringstream d;
    d << n << " triples, " << bad << " verdict mismatches";
    return {n >= 60 && bad == 0, d.str()};
}

// ---- 3. equivalence soundness/power ----
Outcome equivalence_power() {
    using namespace matheval::sym;
    Verdict cited = equivalent(parse_latex("1/\\sqrt{3}"), parse_latex("\\frac{\\sqrt{3}}{3}"));
    if (!cited.is_equivalent()) return {false, "1/sqrt(3) vs sqrt(3)/3 not equivalent"};
    equiv_corpus::Corpus corpus = equiv_corpus::build_corpus(110, 0x5EED01);
    std::size_t missed_eq = 0, missed_dist = 0;
    for (const auto& [a, b] : corpus.equivalent_pairs)
        if (!equivalent(a, b).is_equivalent()) ++missed_eq;
    for (const auto& [a, b] : corpus.distinct_pairs)
        if (!equivalent(a, b).is_distinct()) ++missed_dist;
    std::ostringstream d;
    d << corpus.equivalent_pairs.size() << " rewrite pairs (" << missed_eq << " missed), "
      << corpus.distinct_pairs.size() << " perturbed pairs (" << missed_dist << " missed)";
    return {missed_eq == 0 && missed_dist == 0, d.str()};
}

// ---- 4. Table-4 monotonicity with an exact planted fraction ----
Outcome monotonicity_planted() {
    grading::GradingConfig eq_on, eq_off;
    eq_off.equivalence_enabled = false;
    struct Row {
        std::string pred, target;
    };
    // 10 equivalent-but-not-identical, 25 byte-identical, 15 wrong
    std::vector<Row> rows;
    const Row planted[] = {
        {"1/\\sqrt{3}", "\\frac{\\sqrt{3}}{3}"},
        {"0.5", "\\frac{1}{2}"},
        {"x+x", "2x"},
        {"(x-1)(x+1)", "x^2-1"},
        {"\\sqrt{12}", "2\\sqrt{3}"},
        {"\\frac{2}{4}", "\\frac{1}{2}"},
        {"y y", "y^2"},
        {"\\frac{x}{2}", "0.5x"},
        {"2^{10}", "1024"},
        {"\\sqrt{2}\\sqrt{2}", "2"},
    };
    for (const Row& r : planted) rows.push_back(r);
    for (int i = 0; i < 25; ++i) {
        std::string t = std::to_string(i * 7 + 1);
        rows.push_back({t, t});
    }
    for (int i = 0; i < 15; ++i)
        rows.push_back({std::to_string(1000 + i), std::to_string(2000 + i)});

    std::size_t correct_on = 0, correct_off = 0, regressions = 0;
    for (const Row& r : rows) {
        bool on = grading::grade_math(math_completion(r.pred), r.target, eq_on).correct;
        bool off = grading::grade_math(math_completion(r.pred), r.target, eq_off).correct;
        correct_on += on;
        correct_off += off;
        if (off && !on) ++regressions;
    }
    double planted_fraction = 10.0 / static_cast<double>(rows.size());
    double delta = static_cast<double>(correct_on - correct_off) / static_cast<double>(rows.size());
    std::ostringstream d;
    d << "delta " << delta << " (planted " << planted_fraction << "), regressions "
      << regressions;
    return {correct_on - correct_off == 10 && regressions == 0 && delta > 0, d.str()};
}

// ---- 5. saturation-bound numerics ----
Outcome bound_numerics() {
    metrics::BoundReport r = metrics::majority_bounds(0.5, 0.25, 64);
    double p1_min_err = std::abs(r.p1_min_probeable - 1.0 / 17.0);
    bool res_exact = r.resolution == 0.25;
    metrics::BoundReport r2 = metrics::majority_bounds(0.5, 0.0, 64);
    bool kmin_ok = std::abs(r2.k_min_confidence - 4.0) < 1e-12;
    std::ostringstream d;
    d << "p1_min(k=64) err " << p1_min_err << ", resolution " << r.resolution
      << ", k_min(p1=0.5) " << r2.k_min_confidence;
    return {p1_min_err < 1e-12 && res_exact && kmin_ok, d.str()};
}

// ---- 6. saturation simulation ----
Outcome saturation_simulation() {
    grading::GradingConfig cfg;
    const std::size_t records = 10000, k_max = 256;
    std::size_t maj64 = 0, maj256 = 0, pass64 = 0, pass256 = 0;
    std::mt19937_64 gen(0xFEED5);
    const std::string top = "121", second = "319", rare = "777";
    for (std::size_t i = 0; i < records; ++i) {
        bool top_correct = gen() % 100 < 60;  // else the rare tail answer is correct
        metrics::SampleRecord rec;
        rec.id = "s" + std::to_string(i);
        rec.kind = grading::DatasetKind::Math;
        rec.target = top_correct ? top : rare;
        rec.samples.reserve(k_max);
        for (std::size_t s = 0; s < k_max; ++s) {
            std::size_t u = gen() % 1000;
            std::string ans;
            if (u < 400) ans = top;                   // p1 = 0.4
            else if (u < 600) ans = second;           // p2 = 0.2
            else if (u < 605) ans = rare;             // 0.005 tail target
            else ans = std::to_string(100000 + i * 1000 + s);  // unique wrong numeral
            rec.samples.push_back({math_completion(ans), std::nullopt});
        }
        metrics::VoteTally t64 = metrics::tally_votes(rec, cfg, 64);
        metrics::VoteTally t256 = metrics::tally_votes(rec, cfg, 256);
        maj64 += metrics::maj_at_k(t64, 1, rec, cfg);
        maj256 += metrics::maj_at_k(t256, 1, rec, cfg);
        pass64 += metrics::pass_at_k(rec, 64, cfg);
        pass256 += metrics::pass_at_k(rec, 256, cfg);
    }
    double m64 = static_cast<double>(maj64) / records;
    double m256 = static_cast<double>(maj256) / records;
    double p64 = static_cast<double>(pass64) / records;
    double p256 = static_cast<double>(pass256) / records;
    std::ostringstream d;
    d << "maj1@64 " << m64 << ", maj1@256 " << m256 << ", pass@64 " << p64 << ", pass@256 "
      << p256;
    return {std::abs(m64 - m256) <= 0.02 && p256 > p64, d.str()};
}

// ---- 7. pass@k monotone; maj1@1 == pass@1 ----
Outcome prefix_metric_identities() {
    grading::GradingConfig cfg;
    std::mt19937_64 gen(0xA11CE);
    const char* pool[] = {"1", "2", "\\frac{1}{2}", "0.5", "x", "none"};
    std::size_t mismatches = 0, non_monotone = 0;
    for (std::size_t i = 0; i < 10000; ++i) {
        metrics::SampleRecord rec;
        rec.kind = grading::DatasetKind::Math;
        rec.target = pool[gen() % 5];
        std::size_t n = 1 + gen() % 4;
        for (std::size_t s = 0; s < n; ++s) {
            std::string a = pool[gen() % 6];
            rec.samples.push_back(
                {a == "none" ? std::string("no marker") : math_completion(a), std::nullopt});
        }
        bool prev = false;
        for (std::size_t k = 1; k <= rec.samples.size(); ++k) {
            bool cur = metrics::pass_at_k(rec, k, cfg);
            if (prev && !cur) ++non_monotone;
            prev = cur;
        }
        metrics::VoteTally t1 = metrics::tally_votes(rec, cfg, 1);
        if (metrics::maj_at_k(t1, 1, rec, cfg) != metrics::pass_at_k(rec, 1, cfg)) ++mismatches;
    }
    std::ostringstream d;
    d << "10000 records, " << non_monotone << " monotonicity violations, " << mismatches
      << " maj1@1/pass@1 mismatches";
    return {mismatches == 0 && non_monotone == 0, d.str()};
}

// ---- 8. BLEU oracle + planted chunk ----
Outcome bleu_oracle() {
    std::ifstream in(kFixtures + "/bleu_cases.jsonl");
    if (!in.good()) return {false, "fixture missing"};
    std::size_t n = 0, bad = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        double expected = std::stod(j["bleu"].get<std::string>());
        double got = corpus::bleu(j["candidate"].get<std::string>(),
                                  j["reference"].get<std::string>());
        if (std::abs(got - expected) >= 1e-6) ++bad;
        ++n;
    }
    bool self100 = corpus::bleu("prove the identity holds", "prove the identity holds") == 100.0 &&
                   corpus::bleu("x", "x") == 100.0;

    // planted chunk ranks first at score 100
    corpus::OverlapConfig cfg;
    std::string query = "show that every continuous function on a closed interval is bounded";
    cfg.chunk_size = query.size();
    std::string filler;
    for (int i = 0; i < 40; ++i) filler += "unrelated filler words here ";
    filler.resize(cfg.chunk_size * 2, 'x');
    std::string doc = filler + query;  // planted as the final chunk
    auto hits = corpus::overlap_scan({{"q", query}}, {{"d", doc}}, cfg);
    bool planted = !hits.empty() && hits[0].score == 100.0 && hits[0].chunk_index == 2;

    std::ostringstream d;
    d << n << " pairs, " << bad << " beyond 1e-6; self=100 " << self100 << "; planted top "
      << (hits.empty() ? -1.0 : hits[0].score);
    return {n >= 20 && bad == 0 && self100 && planted, d.str()};
}

// ---- 9. arXiv filter boundaries + HTML cases ----
Outcome corpus_filters() {
    corpus::CleanConfig cfg;  // 75000 tokens, 0.6 density
    std::string body = "\\section{A}";
    body.reserve(160000);
    for (int i = 0; i < 74999; ++i) body += " t";
    corpus::CorpusDocument at_limit = corpus::clean_arxiv("at", body, "", "", cfg);
    body += " t";  // 75001 tokens
    corpus::CorpusDocument over = corpus::clean_arxiv("over", body, "", "", cfg);
    bool tokens_ok = at_limit.accepted() && at_limit.token_count == 75000 &&
                     !over.accepted() && *over.rejection == "over-length";

    // exact 0.6 density boundary at the decision predicate:
    // 75/125 = 0.6 accepts, 751/1250 > 0.6 rejects
    bool density_rule_ok = !corpus::density_exceeds(75, 125, 6, 10) &&
                           corpus::density_exceeds(751, 1250, 6, 10) &&
                           !corpus::density_exceeds(75000, 125000, 6, 10) &&
                           corpus::density_exceeds(75001, 125000, 6, 10);

    // end-to-end straddle at a constructible boundary: threshold 5/13,
    // documents with exactly 10 tokens / 26 chars and 11 tokens / 28 chars
    corpus::CleanConfig ecfg = cfg;
    ecfg.density_num = 5;
    ecfg.density_den = 13;
    std::string d26 = "\\section";
    for (int i = 0; i < 9; ++i) d26 += " a";
    std::string d28 = "\\section";
    for (int i = 0; i < 10; ++i) d28 += " a";
    corpus::CorpusDocument dens_at = corpus::clean_arxiv("e1", d26, "", "", ecfg);
    corpus::CorpusDocument dens_over = corpus::clean_arxiv("e2", d28, "", "", ecfg);
    bool density_e2e_ok = dens_at.accepted() && dens_at.token_count == 10 &&
                          dens_at.char_count == 26 && !dens_over.accepted() &&
                          *dens_over.rejection == "density";

    corpus::CorpusDocument nosec = corpus::clean_arxiv("n", "plain text only", "", "", cfg);
    bool structure_ok = !nosec.accepted() && *nosec.rejection == "no-sections";

    auto latex = corpus::extract_math_html(
        "<p>Euler: <script type=\"math/latex\">e^{\\pi i}+1=0</script></p>");
    bool latex_ok = latex && *latex == "Euler: e^{\\pi i}+1=0";
    auto ascii = corpus::extract_math_html(
        "<p><script type=\"math/asciimath\">sum_(i=1)^n i = n(n+1)/2</script></p>");
    bool ascii_ok = ascii && ascii->find("sum_(i=1)^n i = n(n+1)/2") != std::string::npos;
    auto annot = corpus::extract_math_html(
        "<math><annotation encoding=\"application/x-tex\">\\frac{1}{2}</annotation>"
        "<mi>x</mi></math>");
    bool annot_ok = annot && *annot == "\\frac{1}{2}";
    auto mathml = corpus::extract_math_html("<p>t</p><math><mi>x</mi></math>");
    bool discard_ok = !mathml.has_value();

    std::ostringstream d;
    d << "tokens " << tokens_ok << ", density-rule " << density_rule_ok << ", density-e2e "
      << density_e2e_ok << ", structure " << structure_ok << ", html " << latex_ok << ascii_ok
      << annot_ok << discard_ok;
    return {tokens_ok && density_rule_ok && density_e2e_ok && structure_ok && latex_ok &&
                ascii_ok && annot_ok && discard_ok,
            d.str()};
}

// ---- 10. end-to-end determinism of cmd_grade ----
std::string write_determinism_fixture(const std::string& path) {
    std::ofstream out(path);
    std::mt19937_64 gen(0xD17E);
    const char* targets[] = {"\\frac{\\sqrt{3}}{3}", "121", "2x", "[2,5)", "0.75"};
    const char* preds[] = {"1/\\sqrt{3}", "121", "x+x", "[2,5)", "3/4", "319", "wrong"};
    for (int i = 0; i < 60; ++i) {
        json rec;
        rec["id"] = "p" + std::to_string(i);
        rec["kind"] = "math";
        rec["target"] = targets[i % 5];
        rec["tags"] = {{"topic", i % 2 ? "algebra" : "geometry"}};
        json samples = json::array();
        std::size_t n = 2 + gen() % 3;
        for (std::size_t s = 0; s < n; ++s) {
            json sample;
            sample["text"] = math_completion(preds[gen() % 7]);
            sample["loglikelihood"] = -1.0 - static_cast<double>(gen() % 1000) / 100.0;
            samples.push_back(sample);
        }
        rec["samples"] = samples;
        out << rec.dump() << "\n";
    }
    // one ocw and one multiple-choice record keep all kinds in the run
    out << R"({"id":"ocw1","kind":"ocw","target":"3/4","answer_type":"numeric",)"
        << R"("samples":[{"text":"Final answer: The final answer is 0.75. I hope it is correct."}]})"
        << "\n";
    out << R"({"id":"mc1","kind":"multiple-choice","target":"B",)"
        << R"("samples":[{"text":"Final Answer: The final answer is (B). I hope it is correct."}]})"
        << "\n";
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome cli_determinism() {
    std::string dir = "acceptance_tmp";
    std::system(("mkdir -p " + dir).c_str());
    std::string input = write_determinism_fixture(dir + "/eval.jsonl");
    std::vector<std::string> outputs;
    struct Run {
        const char* name;
        const char* threads;
    };
    Run runs[] = {{"r1", "1"}, {"r2", "1"}, {"r3", "1"}, {"t8", "8"}};
    for (const Run& r : runs) {
        std::string report = dir + "/report_" + r.name + ".jsonl";
        std::string cmd = kCli + " grade --input " + input + " --output " + report +
                          " --k 1,2 --n 1,2 --threads " + r.threads + " > /dev/null";
        int rc = std::system(cmd.c_str());
        if (rc != 0) return {false, std::string("grade run failed: ") + r.name};
        outputs.push_back(slurp(report));
    }
    bool identical = outputs[0] == outputs[1] && outputs[1] == outputs[2] &&
                     outputs[0] == outputs[3];

    // malformed records must fail with a nonzero exit, naming the line
    {
        std::ofstream bad(dir + "/bad.jsonl");
        bad << "{\"id\":\"x\",\"kind\":\"math\"}\n";  // missing fields
        bad.close();
        int rc = std::system((kCli + " grade --input " + dir + "/bad.jsonl --output " + dir +
                              "/bad_report.jsonl > /dev/null 2> " + dir + "/bad.err")
                                 .c_str());
        if (rc == 0) return {false, "malformed input did not fail"};
        std::string err = slurp(dir + "/bad.err");
        if (err.find("line 1") == std::string::npos)
            return {false, "malformed-input error does not name the line"};
    }

    // round trip: re-aggregating the per-problem lines reproduces the
    // overall accuracy row
    std::size_t rt_correct = 0, rt_total = 0;
    double reported = -1.0;
    std::istringstream report(outputs[0]);
    std::string line;
    while (std::getline(report, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (j["type"] == "result") {
            ++rt_total;
            rt_correct += j["verdict"] == "correct";
        } else if (j["type"] == "aggregate" && j["metric"] == "accuracy" &&
                   j["scope"] == "overall") {
            reported = j["accuracy"].get<double>();
        }
    }
    bool round_trip = rt_total > 0 &&
                      reported == static_cast<double>(rt_correct) / static_cast<double>(rt_total);

    std::ostringstream d;
    d << "3 single-thread runs + 8-thread run, byte-identical " << identical << " ("
      << outputs[0].size() << " bytes), aggregate round-trip " << round_trip;
    return {identical && round_trip && !outputs[0].empty(), d.str()};
}

}  // namespace

int main() {
    using Clock = std::chrono::steady_clock;
    struct Criterion {
        const char* name;
        std::function<Outcome()> fn;
    };
    const Criterion criteria[] = {
        {"normalization-oracle (>=200 frozen vectors, byte-identical)", normalization_oracle},
        {"ocw-grading-oracle (>=60 frozen triples, exact verdicts)", ocw_oracle},
        {"equivalence-soundness-power (rewrite vs perturbed pairs)", equivalence_power},
        {"monotonicity-planted-fraction (equivalence-only gains)", monotonicity_planted},
        {"majority-bound-numerics (p1_min=1/17, resolution=0.25 at k=64)", bound_numerics},
        {"saturation-simulation (maj1@k flat, pass@k growing)", saturation_simulation},
        {"prefix-metric-identities (pass@k monotone, maj1@1=pass@1)", prefix_metric_identities},
        {"bleu-oracle (frozen pairs, self-score, planted chunk)", bleu_oracle},
        {"corpus-filter-boundaries (token/density/structure/html)", corpus_filters},
        {"cli-grade-determinism (3 runs, 1 vs 8 threads)", cli_determinism},
    };
    int failures = 0;
    auto t0 = Clock::now();
    for (const Criterion& c : criteria) {
        auto s0 = Clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - s0).count();
        std::printf("[%s] %s — %s (%lldms)\n", o.pass ? "PASS" : "FAIL", c.name,
                    o.detail.c_str(), static_cast<long long>(ms));
        if (!o.pass) ++failures;
    }
    auto total = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
    std::printf("%d/%d criteria passed in %lldms\n",
                static_cast<int>(std::size(criteria)) - failures,
                static_cast<int>(std::size(criteria)), static_cast<long long>(total));
    return failures;
}
