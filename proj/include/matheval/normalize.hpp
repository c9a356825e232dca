#ifndef MATHEVAL_NORMALIZE_HPP_
#define MATHEVAL_NORMALIZE_HPP_

#include "matheval/expr.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace matheval::answers {

enum class AnswerStyle { MathStyle, OcwStyle };

// Ordered, versioned rewrite tables. Order is load-bearing ('an ' must
// precede 'a '); tables are immutable once parsed.
struct NormalizationTables {
    int version = 0;
    std::vector<std::pair<std::string, std::string>> substitutions;
    std::vector<std::string> removals;
    std::vector<std::string> rules;  // named rewrite procedures, applied in order
    std::vector<std::string> units;
    std::vector<std::string> maybe_units;

    static NormalizationTables parse(std::string_view text);  // throws std::invalid_argument
    static const NormalizationTables& builtin();
};

const char* builtin_tables_text();

// Final-answer extraction from a chain-of-thought completion. MathStyle
// takes the last "The final answer is ... . I hope it is correct" marker;
// OcwStyle follows the original grader's split/strip/scrub procedure.
// Absence of the pattern yields nullopt.
std::optional<std::string> extract_final_answer(std::string_view completion, AnswerStyle style);

std::string normalize_final_answer(std::string_view raw);
std::string normalize_final_answer(std::string_view raw, const NormalizationTables& tables);

// Unit-stripping numeric normalization; values keep the original Python
// grader's double semantics. Failures are nullopt, never errors.
std::optional<double> normalize_numeric(std::string_view raw);
std::optional<double> normalize_numeric(std::string_view raw, const NormalizationTables& tables);

enum class SymbolicWant { Expression, Equation };

std::optional<sym::ExprPtr> normalize_symbolic(std::string_view raw, SymbolicWant want);

}  // namespace matheval::answers

#endif  // MATHEVAL_NORMALIZE_HPP_
