#ifndef MATHEVAL_EXPR_HPP_
#define MATHEVAL_EXPR_HPP_

#include "matheval/bigfloat.hpp"
#include "matheval/bignum.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace matheval::sym {

enum class Kind {
    Number,    // exact rational payload (covers integer/rational/decimal literals)
    Constant,  // pi, e, i
    Variable,
    Text,      // bare-word literal
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Root,      // kids = {radicand, order}
    Func,      // named call, label = name
    Equation,  // kids = {lhs, rhs}
    Interval,  // kids = {lo, hi} + openness flags
    Tuple,
};

enum class ConstKind { Pi, E, I };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    Kind kind;
    Rational number;            // Kind::Number
    ConstKind constant = ConstKind::Pi;
    std::string label;          // Variable/Func name, Text content
    std::vector<ExprPtr> kids;
    bool lo_open = false, hi_open = false;  // Kind::Interval
};

ExprPtr make_number(Rational r);
ExprPtr make_int(long long v);
ExprPtr make_constant(ConstKind c);
ExprPtr make_variable(std::string name);
ExprPtr make_text(std::string content);
ExprPtr make_neg(ExprPtr x);
ExprPtr make_binary(Kind k, ExprPtr a, ExprPtr b);
ExprPtr make_nary(Kind k, std::vector<ExprPtr> kids);
ExprPtr make_func(std::string name, std::vector<ExprPtr> args);
ExprPtr make_interval(ExprPtr lo, bool lo_open, ExprPtr hi, bool hi_open);

bool is_number(const ExprPtr& e);
bool is_zero(const ExprPtr& e);
bool is_one(const ExprPtr& e);

// Deterministic total order over expression trees; 0 iff structurally equal.
int compare(const ExprPtr& a, const ExprPtr& b);
bool equal(const ExprPtr& a, const ExprPtr& b);

std::string to_string(const ExprPtr& e);

std::set<std::string> free_variables(const ExprPtr& e);
bool contains_constant(const ExprPtr& e, ConstKind c);

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
};

// Parses the answer-grammar LaTeX subset: numbers, \frac, /, \sqrt[n],
// ^, \pi/e/i, \cdot and juxtaposition, \left(...\right), named functions,
// intervals, tuples, single '=' equations, bare words as text literals.
// Inputs longer than 4096 bytes are rejected.
ExprPtr parse_latex(std::string_view s);

// Deterministic work limit standing in for a wall-clock timeout.
struct EquivalenceBudget {
    int rewrite_steps = 10000;
    int numeric_probes = 12;
    int precision_digits = 50;
    double probe_tolerance = 1e-30;  // relative
    std::uint64_t seed = 0x4D494E;
};

struct CanonicalResult {
    ExprPtr expr;
    bool complete;  // false when the step budget ran out (best-effort form)
};
CanonicalResult canonicalize(const ExprPtr& e, int max_steps);
ExprPtr canonicalize(const ExprPtr& e);

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Assignment = std::map<std::string, Rational>;

// High-precision numeric evaluation; every free variable must be assigned.
// With allow_complex=false, negative radicands / logs of non-positive reals
// and the constant i raise EvalError.
BigComplex eval_numeric(const ExprPtr& e, const Assignment& assignment, int digits,
                        bool allow_complex = true);

enum class VerdictState { Equivalent, Distinct, Unknown };
enum class UnknownReason { BudgetExhausted, Unparseable, IncomparableKinds };

struct Verdict {
    VerdictState state;
    UnknownReason reason = UnknownReason::BudgetExhausted;

    bool is_equivalent() const { return state == VerdictState::Equivalent; }
    bool is_distinct() const { return state == VerdictState::Distinct; }
    bool is_unknown() const { return state == VerdictState::Unknown; }

    static Verdict equivalent() { return {VerdictState::Equivalent, UnknownReason::BudgetExhausted}; }
    static Verdict distinct() { return {VerdictState::Distinct, UnknownReason::BudgetExhausted}; }
    static Verdict unknown(UnknownReason r) { return {VerdictState::Unknown, r}; }
};

// Mathematical equivalence of two parsed answers: canonical difference is
// zero, or all seeded numeric probes of the difference vanish. Throws
// std::invalid_argument on a non-positive budget field.
Verdict equivalent(const ExprPtr& a, const ExprPtr& b,
                   const EquivalenceBudget& budget = {});

}  // namespace matheval::sym

#endif  // MATHEVAL_EXPR_HPP_
