#include "matheval/grading.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace matheval::grading {

namespace {

using answers::AnswerStyle;
using answers::SymbolicWant;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// canonical lhs-rhs difference of an equation
sym::ExprPtr equation_diff(const sym::ExprPtr& eq) {
    return sym::canonicalize(sym::make_binary(sym::Kind::Sub, eq->kids[0], eq->kids[1]));
}

}  // namespace

const char* evidence_name(Evidence e) {
    switch (e) {
        case Evidence::StringMatch: return "string-match";
        case Evidence::SymbolicEquivalence: return "symbolic-equivalence";
        case Evidence::NumericClose: return "numeric-close";
        case Evidence::ExtractionFailed: return "extraction-failed";
        case Evidence::KindMismatch: return "kind-mismatch";
    }
    return "?";
}

bool numeric_equality(double n1, double n2, const GradingConfig& cfg) {
    auto isclose = [&](double a, double b) {
        return std::abs(a - b) <= cfg.abs_tol + cfg.rel_tol * std::abs(b);
    };
    if (isclose(n1, 0.0) || isclose(n2, 0.0) || isclose(n1 - n2, 0.0))
        return std::abs(n1 - n2) < cfg.numeric_threshold * (n1 + n2) / 2;
    return isclose(n1, n2);
}

GradeResult grade_math_answer(std::string_view normalized_answer, std::string_view target,
                              const GradingConfig& cfg) {
    GradeResult r;
    r.normalized_prediction = std::string(normalized_answer);
    r.normalized_target = answers::normalize_final_answer(target);
    if (r.normalized_prediction == r.normalized_target) {
        r.correct = true;
        r.evidence = Evidence::StringMatch;
        return r;
    }
    if (!cfg.equivalence_enabled) {
        r.correct = false;
        r.evidence = Evidence::StringMatch;
        return r;
    }
    r.evidence = Evidence::SymbolicEquivalence;
    try {
        sym::ExprPtr p = sym::parse_latex(r.normalized_prediction);
        sym::ExprPtr t = sym::parse_latex(r.normalized_target);
        sym::Verdict v = sym::equivalent(p, t, cfg.budget);
        r.correct = v.is_equivalent();  // Unknown counts as incorrect
    } catch (const sym::ParseError&) {
        r.correct = false;  // Unknown(unparseable) counts as incorrect
    }
    return r;
}

GradeResult grade_math(std::string_view completion, std::string_view target,
                       const GradingConfig& cfg) {
    std::optional<std::string> raw = answers::extract_final_answer(completion, cfg.math_style);
    if (!raw) {
        GradeResult r;
        r.correct = false;
        r.evidence = Evidence::ExtractionFailed;
        r.normalized_target = answers::normalize_final_answer(target);
        return r;
    }
    return grade_math_answer(answers::normalize_final_answer(*raw), target, cfg);
}

GradeResult grade_ocw_answer(std::optional<std::string> answer, std::string_view target,
                             OcwAnswerType type, const GradingConfig& cfg) {
    GradeResult r;
    switch (type) {
        case OcwAnswerType::Numeric: {
            std::optional<double> tv = answers::normalize_numeric(target);
            if (!tv) {
                r.dataset_error = "could not parse question target answer";
                return r;
            }
            r.normalized_target = format_double(*tv);
            r.evidence = Evidence::NumericClose;
            if (!answer) {
                r.evidence = Evidence::ExtractionFailed;
                return r;
            }
            std::optional<double> pv = answers::normalize_numeric(*answer);
            if (!pv) return r;
            r.normalized_prediction = format_double(*pv);
            r.correct = numeric_equality(*pv, *tv, cfg);
            return r;
        }
        case OcwAnswerType::SymbolicExpression: {
            auto tv = answers::normalize_symbolic(target, SymbolicWant::Expression);
            if (!tv) {
                r.dataset_error = "could not parse question target answer";
                return r;
            }
            r.normalized_target = sym::to_string(*tv);
            r.evidence = Evidence::SymbolicEquivalence;
            if (!answer) {
                r.evidence = Evidence::ExtractionFailed;
                return r;
            }
            auto pv = answers::normalize_symbolic(*answer, SymbolicWant::Expression);
            if (!pv) {
                if (answers::normalize_symbolic(*answer, SymbolicWant::Equation))
                    r.evidence = Evidence::KindMismatch;
                return r;
            }
            r.normalized_prediction = sym::to_string(*pv);
            r.correct = sym::equivalent(*pv, *tv, cfg.budget).is_equivalent();
            return r;
        }
        case OcwAnswerType::SymbolicEquation: {
            auto tv = answers::normalize_symbolic(target, SymbolicWant::Equation);
            if (!tv) {
                r.dataset_error = "could not parse question target answer";
                return r;
            }
            sym::ExprPtr td = equation_diff(*tv);
            r.normalized_target = sym::to_string(td);
            r.evidence = Evidence::SymbolicEquivalence;
            if (!answer) {
                r.evidence = Evidence::ExtractionFailed;
                return r;
            }
            auto pv = answers::normalize_symbolic(*answer, SymbolicWant::Equation);
            if (!pv) {
                if (answers::normalize_symbolic(*answer, SymbolicWant::Expression))
                    r.evidence = Evidence::KindMismatch;
                return r;
            }
            // structural equality of the one-sided forms, up to overall sign
            sym::ExprPtr pd = equation_diff(*pv);
            r.normalized_prediction = sym::to_string(pd);
            if (sym::equal(pd, td)) {
                r.correct = true;
            } else {
                sym::ExprPtr td_neg = sym::canonicalize(sym::make_neg(td));
                r.correct = sym::equal(pd, td_neg);
            }
            return r;
        }
    }
    return r;
}

GradeResult grade_ocw(const OcwRecord& record, const GradingConfig& cfg) {
    std::optional<std::string> answer =
        answers::extract_final_answer(record.completion, AnswerStyle::OcwStyle);
    return grade_ocw_answer(std::move(answer), record.target, record.type, cfg);
}

std::string mc_scrub(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '(' || c == ')' || c == '.' || c == '$' ||
            std::isspace(static_cast<unsigned char>(c)))
            continue;
        out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    return out;
}

GradeResult grade_mc_answer(std::string_view extracted, std::string_view target_letter) {
    GradeResult r;
    r.evidence = Evidence::StringMatch;
    r.normalized_prediction = mc_scrub(extracted);
    r.normalized_target = mc_scrub(target_letter);
    r.correct = !r.normalized_prediction.empty() &&
                r.normalized_prediction == r.normalized_target;
    return r;
}

GradeResult grade_multiple_choice(std::string_view completion, std::string_view target_letter) {
    std::optional<std::string> raw =
        answers::extract_final_answer(completion, AnswerStyle::MathStyle);
    if (!raw) {
        GradeResult r;
        r.correct = false;
        r.evidence = Evidence::ExtractionFailed;
        r.normalized_target = mc_scrub(target_letter);
        return r;
    }
    return grade_mc_answer(*raw, target_letter);
}

}  // namespace matheval::grading
