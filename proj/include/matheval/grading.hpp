#ifndef MATHEVAL_GRADING_HPP_
#define MATHEVAL_GRADING_HPP_

#include "matheval/expr.hpp"
#include "matheval/normalize.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace matheval::grading {

enum class DatasetKind { Math, Ocw, MultipleChoice };
enum class OcwAnswerType { Numeric, SymbolicExpression, SymbolicEquation };

struct GradingConfig {
    double numeric_threshold = 0.01;  // mean-relative threshold for near-zero values
    double rel_tol = 1e-5;
    double abs_tol = 1e-8;
    sym::EquivalenceBudget budget;
    bool equivalence_enabled = true;  // off = exact string match only
    // marker style used when extracting from math-kind completions
    answers::AnswerStyle math_style = answers::AnswerStyle::MathStyle;
    // Unknown equivalence verdicts always count as incorrect.
};

enum class Evidence {
    StringMatch,
    SymbolicEquivalence,
    NumericClose,
    ExtractionFailed,
    KindMismatch,
};

const char* evidence_name(Evidence e);

struct GradeResult {
    bool correct = false;
    Evidence evidence = Evidence::StringMatch;
    std::string normalized_prediction;
    std::string normalized_target;
    // set when the TARGET fails its own normalizer: a dataset defect,
    // reported separately from a wrong prediction
    std::optional<std::string> dataset_error;
};

// Listing-style numeric comparison: near-zero operands use the
// threshold-of-signed-mean rule, everything else abs/rel closeness
// against n2.
bool numeric_equality(double n1, double n2, const GradingConfig& cfg);

GradeResult grade_math(std::string_view completion, std::string_view target,
                       const GradingConfig& cfg);
// same comparison for an answer that is already extracted and normalized
GradeResult grade_math_answer(std::string_view normalized_answer, std::string_view target,
                              const GradingConfig& cfg);

struct OcwRecord {
    std::string target;
    OcwAnswerType type;
    std::string completion;
};

GradeResult grade_ocw(const OcwRecord& record, const GradingConfig& cfg);
GradeResult grade_ocw_answer(std::optional<std::string> answer, std::string_view target,
                             OcwAnswerType type, const GradingConfig& cfg);

GradeResult grade_multiple_choice(std::string_view completion, std::string_view target_letter);
GradeResult grade_mc_answer(std::string_view extracted, std::string_view target_letter);

// scrub "(B)." -> "B" for letter comparison
std::string mc_scrub(std::string_view s);

}  // namespace matheval::grading

#endif  // MATHEVAL_GRADING_HPP_
