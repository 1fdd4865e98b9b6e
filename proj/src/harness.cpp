#include <cmath>
#include <cstdlib>

#include "lassopath/errors.hpp"
#include "lassopath/harness.hpp"

namespace lassopath {

nlohmann::json run_record_to_json(const RunRecord& r) {
    return {{"schema_version", 1},
            {"experiment", r.experiment},
            {"generator", r.generator},
            {"n", r.n},
            {"d", r.d},
            {"sigma", r.sigma},
            {"variance_mode", r.variance_mode ? nlohmann::json(std::string(to_string(*r.variance_mode)))
                                              : nlohmann::json()},
            {"seed", r.seed},
            {"trial_index", r.trial_index},
            {"segment_count", r.segment_count},
            {"breakpoint_count", r.breakpoint_count},
            {"wall_time_s", r.wall_time_s},
            {"precision", std::string(to_string(r.precision))},
            {"kkt_max_violation", r.kkt_max_violation},
            {"ok", r.ok},
            {"error", r.error}};
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("log-log slope needs two or more points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("log-log slope needs positive values");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

std::string table1_plot_script() {
    return R"PY(#!/usr/bin/env python3
# Segment count vs dimension, one line per smoothing level (log scale).
import csv, sys
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "table1.csv"
with open(path) as f:
    rows = list(csv.reader(f))
dims = [int(h.split("=")[1]) for h in rows[0][1:]]
for row in rows[1:]:
    pts = [(d, float(v)) for d, v in zip(dims, row[1:]) if v != "FAILED"]
    if pts:
        label = "no smoothing" if row[0] == "inf" else "sigma = 1e-" + row[0]
        plt.semilogy([p[0] for p in pts], [p[1] for p in pts], marker="o", label=label)
plt.xlabel("d")
plt.ylabel("number of linear segments")
plt.legend(fontsize=6, ncol=2)
plt.savefig(path.replace(".csv", ".png"), dpi=150)
)PY";
}

std::string mnist_plot_script() {
    return R"PY(#!/usr/bin/env python3
# Mean segment count against feature dimension (patch^2 - 1), log-log.
import csv, sys
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "mnist.csv"
with open(path) as f:
    rows = list(csv.DictReader(f))
x = [int(r["feature_dim"]) for r in rows]
y = [float(r["mean_count"]) for r in rows]
plt.loglog(x, y, marker="o", label="mean segment count")
plt.loglog(x, [y[0] * v / x[0] for v in x], linestyle="--", label="linear reference")
plt.xlabel("feature dimension (patch size^2 - 1)")
plt.ylabel("number of linear segments")
plt.legend()
plt.savefig(path.replace(".csv", ".png"), dpi=150)
)PY";
}

std::filesystem::path default_output_dir() {
    if (const char* env = std::getenv("LASSOPATH_OUT"); env && *env) return env;
    return "results";
}

}  // namespace lassopath
