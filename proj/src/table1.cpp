#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "lassopath/harness.hpp"
#include "lassopath/homotopy.hpp"
#include "lassopath/instance_lab.hpp"
#include "lassopath/parallel.hpp"
#include "lassopath/rng.hpp"

namespace lassopath {

namespace {

std::string sigma_label(std::optional<int> k) {
    return k ? std::to_string(*k) : std::string("inf");
}

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Task {
    std::size_t cell;
    std::uint32_t trial;
};

}  // namespace

const Table1Cell& Table1Result::cell(std::size_t d, std::optional<int> k) const {
    for (const auto& c : cells) {
        if (c.d == d && c.neg_log10_sigma == k) return c;
    }
    throw DomainError("no table cell for d=" + std::to_string(d) + ", k=" + sigma_label(k));
}

std::vector<std::optional<int>> parse_sigma_list(const std::string& csv) {
    std::vector<std::optional<int>> out;
    std::stringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item == "inf" || item == "∞") {
            out.emplace_back(std::nullopt);
            continue;
        }
        std::size_t used = 0;
        int k = 0;
        try {
            k = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw FormatError("bad -log10(sigma) entry: " + item);
        out.emplace_back(k);
    }
    return out;
}

Table1Result run_table1(const Table1Options& opts) {
    for (std::size_t d : opts.dims) {
        if (d < 1 || d > 10) throw DomainError("table dimensions must lie in 1..10");
    }
    if (opts.trials < 1) throw DomainError("table needs trials >= 1");

    Table1Result result;
    result.options = opts;

    std::vector<std::optional<ProblemInstance>> bases(opts.dims.size());
    std::vector<std::string> base_errors(opts.dims.size());
    parallel_for(opts.dims.size(), opts.workers, [&](std::size_t i) {
        try {
            bases[i] = gen_adversarial(opts.dims[i], PrecisionMode::Extended);
        } catch (const LassoError& e) {
            base_errors[i] = e.what();
        }
    });

    std::vector<Task> tasks;
    for (const auto& k : opts.neg_log10_sigmas) {
        for (std::size_t i = 0; i < opts.dims.size(); ++i) {
            Table1Cell cell;
            cell.d = opts.dims[i];
            cell.neg_log10_sigma = k;
            cell.trials = k ? opts.trials : 1;
            for (std::uint32_t t = 0; t < cell.trials; ++t) tasks.push_back({result.cells.size(), t});
            result.cells.push_back(cell);
        }
    }

    result.records.resize(tasks.size());
    parallel_for(tasks.size(), opts.workers, [&](std::size_t ti) {
        const Task& task = tasks[ti];
        const Table1Cell& cell = result.cells[task.cell];
        const std::size_t dim_index = task.cell % opts.dims.size();
        RunRecord& rec = result.records[ti];
        rec.experiment = "table1";
        rec.generator = "adversarial";
        rec.n = rec.d = cell.d;
        rec.precision = opts.precision;
        rec.trial_index = task.trial;
        if (!bases[dim_index]) {
            rec.error = base_errors[dim_index];
            return;
        }
        ProblemInstance inst = *bases[dim_index];
        if (cell.neg_log10_sigma) {
            SmoothingSpec spec;
            spec.sigma = std::pow(10.0, -*cell.neg_log10_sigma);
            spec.variance_mode = VarianceMode::PerEntry;
            spec.seed = mix_seed(opts.seed, cell.d * 1000 + static_cast<std::uint64_t>(*cell.neg_log10_sigma + 500));
            spec.trial_index = task.trial;
            inst = smooth(inst, spec);
            rec.sigma = spec.sigma;
            rec.variance_mode = spec.variance_mode;
            rec.seed = spec.seed;
        }
        const auto start = std::chrono::steady_clock::now();
        try {
            PathOptions path_opts;
            path_opts.precision = opts.precision;
            const RegularizationPath path = solve_path(inst, path_opts);
            rec.segment_count = path.count();
            rec.breakpoint_count = path.breakpoints().size();
            rec.kkt_max_violation = path.diagnostics.max_kkt_violation;
            rec.ok = path.diagnostics.kkt_ok;
            if (!rec.ok) rec.error = "KKT check failed";
        } catch (const LassoError& e) {
            rec.error = e.what();
        }
        rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        Table1Cell& cell = result.cells[c];
        std::vector<double> counts;
        for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
            if (tasks[ti].cell != c) continue;
            const RunRecord& rec = result.records[ti];
            if (!rec.ok) {
                ++cell.failed;
                if (cell.error.empty()) cell.error = rec.error;
                continue;
            }
            counts.push_back(static_cast<double>(rec.segment_count));
            cell.min = cell.min == 0 ? rec.segment_count : std::min(cell.min, rec.segment_count);
            cell.max = std::max(cell.max, rec.segment_count);
        }
        if (counts.empty()) continue;
        double sum = 0.0;
        for (double v : counts) sum += v;
        cell.mean = sum / static_cast<double>(counts.size());
        double ss = 0.0;
        for (double v : counts) ss += (v - cell.mean) * (v - cell.mean);
        cell.stddev = counts.size() > 1 ? std::sqrt(ss / static_cast<double>(counts.size() - 1)) : 0.0;
    }
    return result;
}

std::string table1_csv(const Table1Result& result) {
    std::string out = "neg_log10_sigma";
    for (std::size_t d : result.options.dims) out += ",d=" + std::to_string(d);
    out += "\n";
    for (const auto& k : result.options.neg_log10_sigmas) {
        out += sigma_label(k);
        for (std::size_t d : result.options.dims) {
            const auto& c = result.cell(d, k);
            out += ",";
            out += c.all_failed() ? std::string("FAILED") : fixed2(c.mean);
        }
        out += "\n";
    }
    return out;
}

std::string table1_cells_csv(const Table1Result& result) {
    std::string out = "d,neg_log10_sigma,trials,failed,mean,stddev,min,max\n";
    for (const auto& c : result.cells) {
        out += std::to_string(c.d) + "," + sigma_label(c.neg_log10_sigma) + "," + std::to_string(c.trials) + "," +
               std::to_string(c.failed) + "," + (c.all_failed() ? std::string("") : fixed2(c.mean)) + "," +
               (c.all_failed() ? std::string("") : fixed2(c.stddev)) + "," + std::to_string(c.min) + "," +
               std::to_string(c.max) + "\n";
    }
    return out;
}

nlohmann::json table1_json(const Table1Result& result) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : result.cells) {
        cells.push_back({{"d", c.d},
                         {"neg_log10_sigma", sigma_label(c.neg_log10_sigma)},
                         {"trials", c.trials},
                         {"failed", c.failed},
                         {"mean", c.mean},
                         {"stddev", c.stddev},
                         {"min", c.min},
                         {"max", c.max},
                         {"error", c.error}});
    }
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : result.records) records.push_back(run_record_to_json(r));
    nlohmann::json sigmas = nlohmann::json::array();
    for (const auto& k : result.options.neg_log10_sigmas) sigmas.push_back(sigma_label(k));
    return {{"experiment", "table1"},
            {"dims", result.options.dims},
            {"neg_log10_sigmas", sigmas},
            {"trials", result.options.trials},
            {"seed", result.options.seed},
            {"precision", std::string(to_string(result.options.precision))},
            {"cells", cells},
            {"records", records}};
}

}  // namespace lassopath
