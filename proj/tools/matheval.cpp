// matheval: grade model completions against math answer keys, compute
// sampling metrics and majority-vote bounds, clean corpora, and scan for
// train/eval overlap. All I/O is line-delimited JSON; outputs are
// deterministic for fixed inputs and flags regardless of thread count.

#include <CLI11.hpp>
#include <json.hpp>

#include "matheval/corpus.hpp"
#include "matheval/grading.hpp"
#include "matheval/metrics.hpp"

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using json = nlohmann::json;
using namespace matheval;

namespace {

struct LineError : std::runtime_error {
    LineError(std::size_t line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg) {}
};

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

grading::DatasetKind parse_kind(const std::string& s, std::size_t line_no) {
    if (s == "math") return grading::DatasetKind::Math;
    if (s == "ocw") return grading::DatasetKind::Ocw;
    if (s == "multiple-choice" || s == "mc") return grading::DatasetKind::MultipleChoice;
    throw LineError(line_no, "unknown dataset kind '" + s + "'");
}

grading::OcwAnswerType parse_answer_type(const std::string& s, std::size_t line_no) {
    if (s == "numeric") return grading::OcwAnswerType::Numeric;
    if (s == "expression") return grading::OcwAnswerType::SymbolicExpression;
    if (s == "equation") return grading::OcwAnswerType::SymbolicEquation;
    throw LineError(line_no, "unknown answer type '" + s + "'");
}

std::vector<metrics::SampleRecord> load_eval_file(const std::string& path) {
    std::vector<metrics::SampleRecord> records;
    std::set<std::string> ids;
    std::vector<std::string> lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        std::size_t line_no = i + 1;
        json j;
        try {
            j = json::parse(lines[i]);
        } catch (const json::exception& e) {
            throw LineError(line_no, std::string("bad JSON: ") + e.what());
        }
        metrics::SampleRecord r;
        try {
            r.id = j.at("id").get<std::string>();
            r.kind = parse_kind(j.at("kind").get<std::string>(), line_no);
            r.target = j.at("target").get<std::string>();
            if (j.contains("answer_type"))
                r.answer_type = parse_answer_type(j["answer_type"].get<std::string>(), line_no);
            if (j.contains("tags"))
                for (auto& [k, v] : j["tags"].items()) r.tags[k] = v.get<std::string>();
            for (const json& s : j.at("samples")) {
                metrics::Sample sample;
                sample.text = s.at("text").get<std::string>();
                if (s.contains("loglikelihood") && !s["loglikelihood"].is_null())
                    sample.loglikelihood = s["loglikelihood"].get<double>();
                r.samples.push_back(std::move(sample));
            }
        } catch (const json::exception& e) {
            throw LineError(line_no, std::string("bad record: ") + e.what());
        }
        if (r.kind == grading::DatasetKind::Ocw && !r.answer_type)
            throw LineError(line_no, "ocw record without answer_type");
        if (r.samples.empty()) throw LineError(line_no, "record has no samples");
        if (!ids.insert(r.id).second) throw LineError(line_no, "duplicate id '" + r.id + "'");
        records.push_back(std::move(r));
    }
    return records;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    unsigned use = std::min<unsigned>(threads, static_cast<unsigned>(n));
    pool.reserve(use);
    for (unsigned t = 0; t < use; ++t) {
        pool.emplace_back([&]() {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

std::string verdict_str(bool correct) { return correct ? "correct" : "incorrect"; }

json aggregate_row(const std::string& metric, const std::string& scope, std::size_t correct,
                   std::size_t total) {
    json a;
    a["type"] = "aggregate";
    a["metric"] = metric;
    a["scope"] = scope;
    a["correct"] = correct;
    a["total"] = total;
    a["accuracy"] = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
    return a;
}

// ---- grade ----

struct GradeOptions {
    std::string input, output;
    std::vector<std::size_t> ks{1};
    std::vector<std::size_t> ns{1};
    bool no_equivalence = false;
    std::string style = "auto";
    unsigned threads = 1;
    double threshold = 0.01, rel_tol = 1e-5, abs_tol = 1e-8;
    int rewrite_steps = 10000, probes = 12, digits = 50;
    double tolerance = 1e-30;
    std::uint64_t seed = 0x4D494E;
};

struct RecordOutput {
    json result_line;
    bool correct_eq = false, correct_str = false;
    bool dataset_error = false;
    std::map<std::string, bool> metric_verdicts;  // metric name -> correct
    std::map<std::string, bool> metric_present;
    std::optional<bool> rerank_correct;
};

int cmd_grade(const GradeOptions& opt) {
    grading::GradingConfig cfg;
    cfg.numeric_threshold = opt.threshold;
    cfg.rel_tol = opt.rel_tol;
    cfg.abs_tol = opt.abs_tol;
    cfg.budget.rewrite_steps = opt.rewrite_steps;
    cfg.budget.numeric_probes = opt.probes;
    cfg.budget.precision_digits = opt.digits;
    cfg.budget.probe_tolerance = opt.tolerance;
    cfg.budget.seed = opt.seed;
    cfg.equivalence_enabled = !opt.no_equivalence;
    if (opt.style == "ocw") cfg.math_style = answers::AnswerStyle::OcwStyle;
    grading::GradingConfig cfg_str = cfg;
    cfg_str.equivalence_enabled = false;

    std::vector<metrics::SampleRecord> records;
    try {
        records = load_eval_file(opt.input);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::vector<RecordOutput> outputs(records.size());
    parallel_for(records.size(), opt.threads, [&](std::size_t i) {
        const metrics::SampleRecord& rec = records[i];
        RecordOutput& out = outputs[i];
        grading::GradeResult head = metrics::grade_completion(rec, rec.samples[0].text, cfg);
        grading::GradeResult head_str = metrics::grade_completion(rec, rec.samples[0].text, cfg_str);
        out.correct_eq = head.correct;
        out.correct_str = head_str.correct;
        out.dataset_error = head.dataset_error.has_value();

        json r;
        r["type"] = "result";
        r["id"] = rec.id;
        r["verdict"] = verdict_str(head.correct);
        r["string_only_verdict"] = verdict_str(head_str.correct);
        r["evidence"] = grading::evidence_name(head.evidence);
        r["normalized_prediction"] = head.normalized_prediction;
        r["normalized_target"] = head.normalized_target;
        if (head.dataset_error) r["dataset_error"] = *head.dataset_error;
        if (!rec.tags.empty()) r["tags"] = rec.tags;

        json errors = json::array();
        json per_metric = json::object();
        for (std::size_t k : opt.ks) {
            if (k > rec.samples.size()) {
                errors.push_back("k=" + std::to_string(k) + " exceeds " +
                                 std::to_string(rec.samples.size()) + " samples");
                continue;
            }
            bool pass = metrics::pass_at_k(rec, k, cfg);
            out.metric_verdicts["pass@" + std::to_string(k)] = pass;
            out.metric_present["pass@" + std::to_string(k)] = true;
            per_metric["pass@" + std::to_string(k)] = verdict_str(pass);
            metrics::VoteTally tally = metrics::tally_votes(rec, cfg, k);
            for (std::size_t n : opt.ns) {
                bool maj = metrics::maj_at_k(tally, n, rec, cfg);
                std::string name = (n == 1 ? "maj1@" : "maj" + std::to_string(n) + "@") +
                                   std::to_string(k);
                out.metric_verdicts[name] = maj;
                out.metric_present[name] = true;
                per_metric[name] = verdict_str(maj);
            }
        }
        bool have_ll = true;
        for (const auto& s : rec.samples) have_ll = have_ll && s.loglikelihood.has_value();
        if (have_ll) {
            std::size_t best = metrics::rerank_by_loglikelihood(rec);
            out.rerank_correct =
                metrics::grade_completion(rec, rec.samples[best].text, cfg).correct;
            per_metric["rerank-top1"] = verdict_str(*out.rerank_correct);
        }
        r["metrics"] = per_metric;
        if (!errors.empty()) r["errors"] = errors;
        out.result_line = std::move(r);
    });

    // deterministic aggregation in input order
    std::ostringstream body;
    std::size_t correct_eq = 0, correct_str = 0, dataset_errors = 0;
    std::map<std::string, std::pair<std::size_t, std::size_t>> metric_totals;
    std::size_t rerank_correct = 0, rerank_total = 0;
    std::map<std::string, std::map<std::string, std::pair<std::size_t, std::size_t>>> tag_tables;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        body << outputs[i].result_line.dump() << "\n";
        correct_eq += outputs[i].correct_eq;
        correct_str += outputs[i].correct_str;
        dataset_errors += outputs[i].dataset_error;
        for (const auto& [name, present] : outputs[i].metric_present) {
            if (!present) continue;
            auto& [c, t] = metric_totals[name];
            ++t;
            c += outputs[i].metric_verdicts.at(name);
        }
        if (outputs[i].rerank_correct) {
            ++rerank_total;
            rerank_correct += *outputs[i].rerank_correct;
        }
        for (const auto& [key, value] : records[i].tags) {
            auto& [c, t] = tag_tables[key][value];
            ++t;
            c += outputs[i].correct_eq;
        }
    }
    body << aggregate_row("accuracy", "overall", correct_eq, records.size()).dump() << "\n";
    body << aggregate_row("accuracy-string-only", "overall", correct_str, records.size()).dump()
         << "\n";
    for (const auto& [name, ct] : metric_totals)
        body << aggregate_row(name, "overall", ct.first, ct.second).dump() << "\n";
    if (rerank_total)
        body << aggregate_row("rerank-top1", "overall", rerank_correct, rerank_total).dump()
             << "\n";
    for (const auto& [key, values] : tag_tables)
        for (const auto& [value, ct] : values)
            body << aggregate_row("accuracy", "tag:" + key + "=" + value, ct.first, ct.second)
                        .dump()
                 << "\n";
    if (dataset_errors) {
        json d;
        d["type"] = "aggregate";
        d["metric"] = "dataset-errors";
        d["scope"] = "overall";
        d["count"] = dataset_errors;
        body << d.dump() << "\n";
    }

    std::ofstream out(opt.output);
    if (!out.good()) {
        std::cerr << "error: cannot write " << opt.output << "\n";
        return 2;
    }
    out << body.str();

    double acc = records.empty() ? 0.0 : static_cast<double>(correct_eq) / records.size();
    double acc_str = records.empty() ? 0.0 : static_cast<double>(correct_str) / records.size();
    std::cout << "graded " << records.size() << " records\n";
    std::cout << "accuracy (string match only): " << acc_str << "\n";
    std::cout << "accuracy (with equivalence):  " << acc << "\n";
    if (dataset_errors) std::cout << "dataset errors: " << dataset_errors << "\n";
    std::cout << "report: " << opt.output << "\n";
    return 0;
}

// ---- bounds ----

int cmd_bounds(double p1, double p2, std::size_t k, bool as_json) {
    metrics::BoundReport r;
    try {
        r = metrics::majority_bounds(p1, p2, k);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (as_json) {
        json j;
        j["k"] = r.k;
        j["p1"] = r.p1;
        j["p2"] = r.p2;
        j["k_min_confidence"] = r.k_min_confidence;
        j["resolution"] = r.resolution;
        j["p1_min_probeable"] = r.p1_min_probeable;
        std::cout << j.dump() << "\n";
        return 0;
    }
    std::cout << "majority-voting bounds at k=" << r.k << ", p1=" << r.p1 << ", p2=" << r.p2
              << "\n";
    std::cout << "  k needed to resolve the majority (95%): k > " << r.k_min_confidence << "\n";
    std::cout << "  smallest p1 probeable at this k:        p1 > " << r.p1_min_probeable << "\n";
    std::cout << "  worst-case p1-p2 resolution at this k:  " << r.resolution << "\n";
    return 0;
}

// ---- extract ----

int cmd_extract(const std::string& kind, const std::string& input, const std::string& output,
                std::size_t max_tokens, const std::string& max_density) {
    corpus::CleanConfig ccfg;
    ccfg.max_tokens = max_tokens;
    {
        // exact decimal fraction, e.g. "0.6" -> 6/10
        std::size_t dot = max_density.find('.');
        std::string digits = max_density;
        std::size_t frac = 0;
        if (dot != std::string::npos) {
            frac = max_density.size() - dot - 1;
            digits = max_density.substr(0, dot) + max_density.substr(dot + 1);
        }
        ccfg.density_num = static_cast<unsigned>(std::stoul(digits));
        ccfg.density_den = 1;
        for (std::size_t i = 0; i < frac; ++i) ccfg.density_den *= 10;
    }

    std::ifstream in(input);
    if (!in.good()) {
        std::cerr << "error: cannot open " << input << "\n";
        return 2;
    }
    std::ofstream out(output);
    if (!out.good()) {
        std::cerr << "error: cannot write " << output << "\n";
        return 2;
    }
    std::size_t accepted = 0;
    std::map<std::string, std::size_t> rejected;
    std::string line;
    for (std::size_t i = 0; std::getline(in, line); ++i) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            std::cerr << "error: line " << i + 1 << ": " << e.what() << "\n";
            return 2;
        }
        std::string id = j.value("id", "line-" + std::to_string(i + 1));
        std::string text;
        if (j.contains("path")) {
            std::ifstream doc(j["path"].get<std::string>());
            if (!doc.good()) {
                std::cerr << "error: line " << i + 1 << ": cannot open "
                          << j["path"].get<std::string>() << "\n";
                return 2;
            }
            std::stringstream ss;
            ss << doc.rdbuf();
            text = ss.str();
        } else {
            text = j.value("text", "");
        }
        json row;
        row["type"] = "document";
        row["id"] = id;
        if (kind == "arxiv") {
            corpus::CorpusDocument doc = corpus::clean_arxiv(
                id, text, j.value("title", ""), j.value("abstract", ""), ccfg);
            row["accepted"] = doc.accepted();
            if (doc.accepted()) {
                ++accepted;
                row["text"] = doc.extracted;
                row["tokens"] = doc.token_count;
                row["chars"] = doc.char_count;
            } else {
                ++rejected[*doc.rejection];
                row["rejection"] = *doc.rejection;
            }
        } else {  // webpage
            if (!corpus::page_has_math(text)) {
                ++rejected["no-math-marker"];
                row["accepted"] = false;
                row["rejection"] = "no-math-marker";
            } else if (auto extracted = corpus::extract_math_html(text)) {
                ++accepted;
                row["accepted"] = true;
                row["text"] = *extracted;
            } else {
                ++rejected["mathml-only"];
                row["accepted"] = false;
                row["rejection"] = "mathml-only";
            }
        }
        out << row.dump() << "\n";
    }
    std::cout << "accepted: " << accepted << "\n";
    for (const auto& [reason, count] : rejected)
        std::cout << "rejected (" << reason << "): " << count << "\n";
    return 0;
}

// ---- overlap ----

int cmd_overlap(const std::string& queries_path, const std::string& corpus_path,
                const std::string& output, corpus::OverlapConfig cfg, unsigned threads,
                const std::string& histogram_path) {
    std::vector<corpus::Query> queries;
    try {
        std::vector<std::string> qlines = read_lines(queries_path);
        for (std::size_t i = 0; i < qlines.size(); ++i) {
            if (qlines[i].empty()) continue;
            json j = json::parse(qlines[i]);
            queries.push_back({j.value("id", "q" + std::to_string(i + 1)),
                               j.at("text").get<std::string>()});
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    // The corpus streams through a bounded batch window so inputs larger
    // than memory scan fine; per-document work is parallel inside a batch
    // and hits merge in document order, keeping output deterministic.
    std::ifstream corpus_in(corpus_path);
    if (!corpus_in.good()) {
        std::cerr << "error: cannot open " << corpus_path << "\n";
        return 2;
    }
    std::vector<corpus::OverlapHit> hits;
    std::size_t docs_seen = 0;
    const std::size_t batch_size = 256;
    std::string line;
    bool more = true;
    std::size_t line_no = 0;
    while (more) {
        std::vector<std::pair<std::string, std::string>> batch;
        while (batch.size() < batch_size) {
            if (!std::getline(corpus_in, line)) {
                more = false;
                break;
            }
            ++line_no;
            if (line.empty()) continue;
            try {
                json j = json::parse(line);
                batch.emplace_back(j.value("id", "d" + std::to_string(line_no)),
                                   j.at("text").get<std::string>());
            } catch (const std::exception& e) {
                std::cerr << "error: line " << line_no << ": " << e.what() << "\n";
                return 2;
            }
        }
        if (batch.empty()) break;
        std::vector<std::vector<corpus::OverlapHit>> parts(batch.size());
        parallel_for(batch.size(), threads, [&](std::size_t i) {
            parts[i] = corpus::scan_document(queries, batch[i].first, batch[i].second, cfg);
        });
        for (auto& p : parts) hits.insert(hits.end(), p.begin(), p.end());
        docs_seen += batch.size();
    }
    corpus::sort_hits(hits);

    std::ofstream out(output);
    if (!out.good()) {
        std::cerr << "error: cannot write " << output << "\n";
        return 2;
    }
    std::size_t high = 0;
    for (const auto& h : hits) {
        if (h.score >= cfg.high_threshold) ++high;
        json j;
        j["type"] = "hit";
        j["query_id"] = h.query_id;
        j["doc_id"] = h.doc_id;
        j["chunk_index"] = h.chunk_index;
        j["score"] = h.score;
        j["excerpt"] = h.excerpt;
        out << j.dump() << "\n";
    }
    auto bins = corpus::score_histogram(hits);
    std::ostringstream hist;
    hist << "# bleu_lo\tbleu_hi\tcount\n";
    for (const auto& b : bins) {
        if (b.lo < cfg.report_floor && b.count == 0) continue;
        hist << b.lo << "\t" << b.hi << "\t" << b.count << "\n";
    }
    if (!histogram_path.empty()) {
        std::ofstream hout(histogram_path);
        if (!hout.good()) {
            std::cerr << "error: cannot write " << histogram_path << "\n";
            return 2;
        }
        hout << hist.str();
    }
    std::cout << "queries: " << queries.size() << ", documents: " << docs_seen << "\n";
    std::cout << "hits at or above floor " << cfg.report_floor << ": " << hits.size() << "\n";
    std::cout << "high-overlap hits (>= " << cfg.high_threshold << "): " << high << "\n";
    if (histogram_path.empty()) std::cout << hist.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"math answer grading, sampling metrics, and corpus overlap tools"};
    app.require_subcommand(1);

    GradeOptions gopt;
    CLI::App* grade = app.add_subcommand("grade", "grade an evaluation file and write a report");
    grade->add_option("--input", gopt.input, "evaluation records (JSON lines)")->required();
    grade->add_option("--output", gopt.output, "report path (JSON lines)")->required();
    grade->add_option("--k", gopt.ks, "sample-count prefixes for pass@k / maj@k")->delimiter(',');
    grade->add_option("--n", gopt.ns, "top-n list for majn@k")->delimiter(',');
    grade->add_flag("--no-equivalence", gopt.no_equivalence,
                    "grade by exact string match only");
    grade->add_option("--style", gopt.style, "marker style for math records")
        ->check(CLI::IsMember({"auto", "math", "ocw"}));
    grade->add_option("--threads", gopt.threads, "worker threads (output is identical)");
    grade->add_option("--threshold", gopt.threshold, "near-zero mean-relative threshold");
    grade->add_option("--rel-tol", gopt.rel_tol, "relative closeness tolerance");
    grade->add_option("--abs-tol", gopt.abs_tol, "absolute closeness tolerance");
    grade->add_option("--rewrite-steps", gopt.rewrite_steps, "canonicalization step budget");
    grade->add_option("--probes", gopt.probes, "numeric probe count");
    grade->add_option("--digits", gopt.digits, "probe precision in decimal digits");
    grade->add_option("--tolerance", gopt.tolerance, "probe relative tolerance");
    grade->add_option("--seed", gopt.seed, "probe-point generator seed");

    double p1 = 0, p2 = 0;
    std::size_t bk = 64;
    bool bounds_json = false;
    CLI::App* bounds = app.add_subcommand("bounds", "majority-voting saturation bounds");
    bounds->add_option("--p1", p1, "top answer probability")->required();
    bounds->add_option("--p2", p2, "second answer probability");
    bounds->add_option("--k", bk, "sample count");
    bounds->add_flag("--json", bounds_json, "emit JSON");

    std::string ekind, einput, eoutput, edensity = "0.6";
    std::size_t emax_tokens = 75000;
    CLI::App* extract = app.add_subcommand("extract", "clean and filter corpus documents");
    extract->add_option("--kind", ekind, "arxiv or webpage")
        ->required()
        ->check(CLI::IsMember({"arxiv", "webpage"}));
    extract->add_option("--input", einput, "document records (JSON lines)")->required();
    extract->add_option("--output", eoutput, "extracted documents (JSON lines)")->required();
    extract->add_option("--max-tokens", emax_tokens, "token-count rejection bound");
    extract->add_option("--max-density", edensity, "tokens-per-character rejection bound");

    std::string oqueries, ocorpus, ooutput, ohistogram;
    corpus::OverlapConfig ocfg;
    std::string ounit = "chars";
    unsigned othreads = 1;
    CLI::App* overlap = app.add_subcommand("overlap", "BLEU overlap scan of queries vs corpus");
    overlap->add_option("--queries", oqueries, "query records (JSON lines)")->required();
    overlap->add_option("--corpus", ocorpus, "corpus documents (JSON lines)")->required();
    overlap->add_option("--output", ooutput, "hit report (JSON lines)")->required();
    overlap->add_option("--chunk-size", ocfg.chunk_size, "chunk size")
        ->check(CLI::PositiveNumber);
    overlap->add_option("--chunk-unit", ounit, "chars or words")
        ->check(CLI::IsMember({"chars", "words"}));
    overlap->add_option("--max-n", ocfg.max_n, "maximum BLEU n-gram order")
        ->check(CLI::PositiveNumber);
    overlap->add_option("--floor", ocfg.report_floor, "report floor (BLEU)")
        ->check(CLI::Range(0.0, 100.0));
    overlap->add_option("--high", ocfg.high_threshold, "high-overlap threshold (BLEU)")
        ->check(CLI::Range(0.0, 100.0));
    overlap->add_option("--histogram", ohistogram, "write histogram table here");
    overlap->add_option("--threads", othreads, "worker threads (output is identical)");

    CLI11_PARSE(app, argc, argv);

    if (grade->parsed()) return cmd_grade(gopt);
    if (bounds->parsed()) return cmd_bounds(p1, p2, bk, bounds_json);
    if (extract->parsed()) return cmd_extract(ekind, einput, eoutput, emax_tokens, edensity);
    if (overlap->parsed()) {
        ocfg.unit = ounit == "words" ? corpus::ChunkUnit::Words : corpus::ChunkUnit::Characters;
        return cmd_overlap(oqueries, ocorpus, ooutput, ocfg, othreads, ohistogram);
    }
    return 1;
}
