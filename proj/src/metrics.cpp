#include "matheval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace matheval::metrics {

namespace {

using answers::AnswerStyle;
using grading::DatasetKind;
using grading::GradingConfig;

std::size_t dsu_find(std::vector<std::size_t>& p, std::size_t x) {
    while (p[x] != x) {
        p[x] = p[p[x]];
        x = p[x];
    }
    return x;
}

// union keeping the smaller index as root so representatives stay at the
// earliest first occurrence
void dsu_union(std::vector<std::size_t>& p, std::size_t a, std::size_t b) {
    a = dsu_find(p, a);
    b = dsu_find(p, b);
    if (a == b) return;
    if (a < b) p[b] = a;
    else p[a] = b;
}

}  // namespace

std::optional<std::string> extract_normalized_answer(const SampleRecord& record,
                                                     const std::string& completion,
                                                     const GradingConfig& cfg) {
    switch (record.kind) {
        case DatasetKind::Math: {
            auto raw = answers::extract_final_answer(completion, cfg.math_style);
            if (!raw) return std::nullopt;
            return answers::normalize_final_answer(*raw);
        }
        case DatasetKind::MultipleChoice: {
            auto raw = answers::extract_final_answer(completion, AnswerStyle::MathStyle);
            if (!raw) return std::nullopt;
            return grading::mc_scrub(*raw);
        }
        case DatasetKind::Ocw:
            return answers::extract_final_answer(completion, AnswerStyle::OcwStyle);
    }
    return std::nullopt;
}

grading::GradeResult grade_completion(const SampleRecord& record, const std::string& completion,
                                      const GradingConfig& cfg) {
    switch (record.kind) {
        case DatasetKind::Math:
            return grading::grade_math(completion, record.target, cfg);
        case DatasetKind::MultipleChoice:
            return grading::grade_multiple_choice(completion, record.target);
        case DatasetKind::Ocw: {
            if (!record.answer_type) {
                grading::GradeResult r;
                r.dataset_error = "missing answer type";
                return r;
            }
            return grading::grade_ocw({record.target, *record.answer_type, completion}, cfg);
        }
    }
    return {};
}

grading::GradeResult grade_answer(const SampleRecord& record, const std::string& normalized_answer,
                                  const GradingConfig& cfg) {
    switch (record.kind) {
        case DatasetKind::Math:
            return grading::grade_math_answer(normalized_answer, record.target, cfg);
        case DatasetKind::MultipleChoice:
            return grading::grade_mc_answer(normalized_answer, record.target);
        case DatasetKind::Ocw: {
            if (!record.answer_type) {
                grading::GradeResult r;
                r.dataset_error = "missing answer type";
                return r;
            }
            return grading::grade_ocw_answer(normalized_answer, record.target,
                                             *record.answer_type, cfg);
        }
    }
    return {};
}

VoteTally tally_votes(const SampleRecord& record, const GradingConfig& cfg, std::size_t k) {
    if (record.samples.empty()) throw std::invalid_argument("tally_votes: no samples");
    std::size_t n = record.samples.size();
    if (k != static_cast<std::size_t>(-1)) {
        if (k < 1 || k > n)
            throw std::invalid_argument("tally_votes: k exceeds available samples");
        n = k;
    }
    VoteTally tally;
    tally.total = n;

    // group by normalized answer string in first-occurrence order
    std::vector<VoteGroup> groups;
    std::map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < n; ++i) {
        auto key = extract_normalized_answer(record, record.samples[i].text, cfg);
        if (!key) {
            ++tally.extraction_failures;
            continue;
        }
        auto it = index_of.find(*key);
        if (it == index_of.end()) {
            index_of.emplace(*key, groups.size());
            groups.push_back(VoteGroup{*key, {i}});
        } else {
            groups[it->second].members.push_back(i);
        }
    }

    // merge groups whose representatives are mathematically equivalent
    std::vector<std::size_t> parent(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) parent[g] = g;
    if (cfg.equivalence_enabled && record.kind != DatasetKind::MultipleChoice &&
        groups.size() > 1) {
        std::vector<sym::ExprPtr> parsed(groups.size());
        std::vector<sym::ExprPtr> canon(groups.size());
        for (std::size_t g = 0; g < groups.size(); ++g) {
            try {
                parsed[g] = sym::parse_latex(groups[g].representative);
                canon[g] = sym::canonicalize(parsed[g], cfg.budget.rewrite_steps).expr;
            } catch (const sym::ParseError&) {
                // unparseable representatives never merge
            }
        }
        for (std::size_t i = 0; i + 1 < groups.size(); ++i) {
            if (!parsed[i]) continue;
            for (std::size_t j = i + 1; j < groups.size(); ++j) {
                if (!parsed[j]) continue;
                if (dsu_find(parent, i) == dsu_find(parent, j)) continue;
                if (sym::equal(canon[i], canon[j])) {
                    dsu_union(parent, i, j);
                    continue;
                }
                // distinct ground numerals can never be equivalent
                if (sym::is_number(canon[i]) && sym::is_number(canon[j])) continue;
                if (sym::equivalent(parsed[i], parsed[j], cfg.budget).is_equivalent())
                    dsu_union(parent, i, j);
            }
        }
    }

    std::map<std::size_t, VoteGroup> merged;  // keyed by root (earliest group index)
    for (std::size_t g = 0; g < groups.size(); ++g) {
        std::size_t root = dsu_find(parent, g);
        auto [it, fresh] = merged.try_emplace(root);
        if (fresh) it->second.representative = groups[root].representative;
        it->second.members.insert(it->second.members.end(), groups[g].members.begin(),
                                  groups[g].members.end());
    }
    for (auto& [root, grp] : merged) {
        std::sort(grp.members.begin(), grp.members.end());
        tally.groups.push_back(std::move(grp));
    }
    std::stable_sort(tally.groups.begin(), tally.groups.end(),
                     [](const VoteGroup& a, const VoteGroup& b) {
                         if (a.count() != b.count()) return a.count() > b.count();
                         return a.members.front() < b.members.front();
                     });
    return tally;
}

bool maj_at_k(const VoteTally& tally, std::size_t n, const SampleRecord& record,
              const GradingConfig& cfg) {
    if (n < 1) throw std::invalid_argument("maj_at_k: n must be at least 1");
    std::size_t top = std::min(n, tally.groups.size());
    for (std::size_t i = 0; i < top; ++i) {
        if (grade_answer(record, tally.groups[i].representative, cfg).correct) return true;
    }
    return false;
}

bool pass_at_k(const SampleRecord& record, std::size_t k, const GradingConfig& cfg) {
    if (k < 1 || k > record.samples.size())
        throw std::invalid_argument("pass_at_k: k exceeds available samples");
    for (std::size_t i = 0; i < k; ++i) {
        if (grade_completion(record, record.samples[i].text, cfg).correct) return true;
    }
    return false;
}

std::size_t rerank_by_loglikelihood(const SampleRecord& record) {
    if (record.samples.empty())
        throw std::invalid_argument("rerank_by_loglikelihood: no samples");
    std::size_t best = 0;
    bool have = false;
    double best_ll = 0;
    for (std::size_t i = 0; i < record.samples.size(); ++i) {
        const auto& ll = record.samples[i].loglikelihood;
        if (!ll)
            throw std::invalid_argument("rerank_by_loglikelihood: sample " + std::to_string(i) +
                                        " has no log-likelihood");
        if (!have || *ll > best_ll) {
            have = true;
            best_ll = *ll;
            best = i;
        }
    }
    return best;
}

BoundReport majority_bounds(double p1, double p2, std::size_t k) {
    if (!(p1 > 0.0) || p1 > 1.0) throw std::invalid_argument("majority_bounds: need 0 < p1 <= 1");
    if (p2 < 0.0 || p2 > p1) throw std::invalid_argument("majority_bounds: need 0 <= p2 <= p1");
    if (k < 1) throw std::invalid_argument("majority_bounds: need k >= 1");
    BoundReport r;
    r.k = k;
    r.p1 = p1;
    r.p2 = p2;
    r.k_min_confidence = 4.0 * (1.0 / p1 - 1.0);
    r.p1_min_probeable = 1.0 / (static_cast<double>(k) / 4.0 + 1.0);
    // worst-case gap where the indistinguishability bound 4/(p1-p2)^2 equals k
    r.resolution = std::sqrt(4.0 / static_cast<double>(k));
    return r;
}

AccuracyTable aggregate_report(const std::vector<GradedRecord>& records,
                               const std::string& tag_key) {
    AccuracyTable table;
    table.overall.key = "overall";
    std::map<std::string, AccuracyRow> rows;
    for (const GradedRecord& r : records) {
        ++table.overall.total;
        if (r.result.correct) ++table.overall.correct;
        auto it = r.tags.find(tag_key);
        if (it == r.tags.end()) continue;
        AccuracyRow& row = rows[it->second];
        row.key = it->second;
        ++row.total;
        if (r.result.correct) ++row.correct;
    }
    for (auto& [key, row] : rows) {
        row.accuracy = row.total ? static_cast<double>(row.correct) / row.total : 0.0;
        table.rows.push_back(row);
    }
    table.overall.accuracy =
        table.overall.total ? static_cast<double>(table.overall.correct) / table.overall.total : 0.0;
    return table;
}

}  // namespace matheval::metrics
