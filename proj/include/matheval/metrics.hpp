#ifndef MATHEVAL_METRICS_HPP_
#define MATHEVAL_METRICS_HPP_

#include "matheval/grading.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace matheval::metrics {

struct Sample {
    std::string text;
    std::optional<double> loglikelihood;
};

struct SampleRecord {
    std::string id;
    grading::DatasetKind kind = grading::DatasetKind::Math;
    std::string target;
    std::optional<grading::OcwAnswerType> answer_type;  // Ocw only
    std::map<std::string, std::string> tags;            // topic/level keys
    std::vector<Sample> samples;                        // generation order
};

struct VoteGroup {
    std::string representative;       // normalized answer of the earliest member
    std::vector<std::size_t> members; // sample indices, ascending
    std::size_t count() const { return members.size(); }
};

struct VoteTally {
    std::size_t total = 0;  // N: all counted samples, extraction failures included
    std::size_t extraction_failures = 0;
    std::vector<VoteGroup> groups;  // count desc, ties by earliest occurrence

    std::size_t distinct_answers() const { return groups.size(); }  // A_N
    double p(std::size_t i) const {
        return total == 0 || i >= groups.size()
                   ? 0.0
                   : static_cast<double>(groups[i].count()) / static_cast<double>(total);
    }
    double p1() const { return p(0); }
    double p2() const { return p(1); }
};

// per-kind extraction + normalization used as the vote-grouping key
std::optional<std::string> extract_normalized_answer(const SampleRecord& record,
                                                     const std::string& completion,
                                                     const grading::GradingConfig& cfg);

grading::GradeResult grade_completion(const SampleRecord& record, const std::string& completion,
                                      const grading::GradingConfig& cfg);
grading::GradeResult grade_answer(const SampleRecord& record, const std::string& normalized_answer,
                                  const grading::GradingConfig& cfg);

// Tallies the first k samples (all when k is npos). Groups by normalized
// answer string, then merges pairwise-equivalent representatives with a
// union-find (ascending merge order). Throws std::invalid_argument when
// k exceeds the sample count.
VoteTally tally_votes(const SampleRecord& record, const grading::GradingConfig& cfg,
                      std::size_t k = static_cast<std::size_t>(-1));

// correct iff any of the top-n group representatives grades correct;
// n > A_N clamps to A_N
bool maj_at_k(const VoteTally& tally, std::size_t n, const SampleRecord& record,
              const grading::GradingConfig& cfg);

// correct iff any of the first k samples grades correct (prefix semantics);
// throws std::invalid_argument when k exceeds the sample count
bool pass_at_k(const SampleRecord& record, std::size_t k, const grading::GradingConfig& cfg);

// index of the maximum log-likelihood sample; ties break to the earliest.
// Throws std::invalid_argument if any sample lacks a log-likelihood.
std::size_t rerank_by_loglikelihood(const SampleRecord& record);

struct BoundReport {
    std::size_t k = 0;
    double p1 = 0, p2 = 0;
    double k_min_confidence = 0;   // k > 4(1/p1 - 1) to see the majority at all
    double resolution = 0;         // smallest p1-p2 distinguishable at k (worst case)
    double p1_min_probeable = 0;   // 1/(k/4 + 1)
};

// Saturation/confidence bounds for majority voting; throws
// std::invalid_argument unless 0 < p1 <= 1, 0 <= p2 <= p1, k >= 1.
BoundReport majority_bounds(double p1, double p2, std::size_t k);

struct GradedRecord {
    std::string id;
    std::map<std::string, std::string> tags;
    grading::GradeResult result;
};

struct AccuracyRow {
    std::string key;
    std::size_t correct = 0;
    std::size_t total = 0;
    double accuracy = 0;
};

struct AccuracyTable {
    std::vector<AccuracyRow> rows;  // per tag value, sorted by key
    AccuracyRow overall;
};

// per-key accuracy for one tag dimension plus the overall row; records
// without the tag count only toward the overall
AccuracyTable aggregate_report(const std::vector<GradedRecord>& records,
                               const std::string& tag_key);

}  // namespace matheval::metrics

#endif  // MATHEVAL_METRICS_HPP_
