#include "lassopath/records.hpp"

#include <cmath>
#include <fstream>

namespace lassopath {

using nlohmann::json;

namespace {

json hex_array(std::span<const Real> values) {
    json out = json::array();
    for (const Real& v : values) out.push_back(quad_to_hex(v));
    return out;
}

Vector<Real> from_hex_array(const json& j) {
    Vector<Real> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(quad_from_hex(v.get<std::string>()));
    return out;
}

void expect_kind(const json& j, const char* kind) {
    if (!j.is_object() || j.value("kind", "") != kind) {
        throw FormatError(std::string("expected a ") + kind + " record");
    }
    if (j.value("schema_version", 0) != schema_version) throw FormatError("unsupported schema_version");
    if (j.value("encoding", "") != "binary128-hex") throw FormatError("unsupported scalar encoding");
}

// JSON has no NaN or infinity; those become null.
json number_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

}  // namespace

json instance_to_json(const ProblemInstance& inst) {
    json meta = {
        {"generator", inst.meta.generator},
        {"seed", inst.meta.seed},
        {"sigma", inst.meta.sigma},
        {"trial_index", inst.meta.trial_index},
        {"normalized", inst.meta.normalized},
        {"scale", inst.meta.scale},
    };
    meta["variance_mode"] = inst.meta.variance_mode ? json(std::string(to_string(*inst.meta.variance_mode))) : json();
    return {
        {"schema_version", schema_version},
        {"kind", "instance"},
        {"encoding", "binary128-hex"},
        {"n", inst.n()},
        {"d", inst.d()},
        {"meta", meta},
        {"x", hex_array(inst.x.data())},
        {"y", hex_array(inst.y)},
    };
}

ProblemInstance instance_from_json(const json& j) {
    expect_kind(j, "instance");
    ProblemInstance inst;
    const auto n = j.at("n").get<std::size_t>();
    const auto d = j.at("d").get<std::size_t>();
    const Vector<Real> x = from_hex_array(j.at("x"));
    if (x.size() != n * d) throw FormatError("x payload has the wrong length");
    inst.x = Matrix<Real>(n, d);
    std::copy(x.begin(), x.end(), inst.x.data().begin());
    inst.y = from_hex_array(j.at("y"));
    const json& meta = j.at("meta");
    inst.meta.generator = meta.value("generator", "manual");
    inst.meta.seed = meta.value("seed", std::uint64_t{0});
    inst.meta.sigma = meta.value("sigma", 0.0);
    inst.meta.trial_index = meta.value("trial_index", std::uint64_t{0});
    inst.meta.normalized = meta.value("normalized", false);
    inst.meta.scale = meta.value("scale", 1.0);
    if (meta.contains("variance_mode") && !meta["variance_mode"].is_null()) {
        inst.meta.variance_mode = parse_variance_mode(meta["variance_mode"].get<std::string>());
    }
    inst.validate();
    return inst;
}

json path_to_json(const RegularizationPath& path) {
    json segments = json::array();
    for (const auto& s : path.segments) {
        segments.push_back({
            {"lambda_hi", quad_to_hex(s.lambda_hi)},
            {"lambda_lo", quad_to_hex(s.lambda_lo)},
            {"signs", s.signs},
            {"active", s.active},
            {"intercept", hex_array(s.intercept)},
            {"slope", hex_array(s.slope)},
        });
    }
    const auto& diag = path.diagnostics;
    return {
        {"schema_version", schema_version},
        {"kind", "path"},
        {"encoding", "binary128-hex"},
        {"d", path.d},
        {"lambda_max", quad_to_hex(path.lambda_max)},
        {"lambda_min", quad_to_hex(path.lambda_min)},
        {"count", path.count()},
        {"diagnostics",
         {{"precision", std::string(to_string(diag.precision))},
          {"max_kkt_violation", diag.max_kkt_violation},
          {"kkt_tol", diag.kkt_tol},
          {"kkt_ok", diag.kkt_ok},
          {"tie_events", diag.tie_events}}},
        {"segments", segments},
    };
}

RegularizationPath path_from_json(const json& j) {
    expect_kind(j, "path");
    RegularizationPath path;
    path.d = j.at("d").get<std::size_t>();
    path.lambda_max = quad_from_hex(j.at("lambda_max").get<std::string>());
    path.lambda_min = quad_from_hex(j.at("lambda_min").get<std::string>());
    const json& diag = j.at("diagnostics");
    path.diagnostics.precision = parse_precision(diag.at("precision").get<std::string>());
    path.diagnostics.max_kkt_violation = diag.at("max_kkt_violation").get<double>();
    path.diagnostics.kkt_tol = diag.at("kkt_tol").get<double>();
    path.diagnostics.kkt_ok = diag.at("kkt_ok").get<bool>();
    path.diagnostics.tie_events = diag.at("tie_events").get<std::size_t>();
    for (const auto& s : j.at("segments")) {
        PathSegment seg;
        seg.lambda_hi = quad_from_hex(s.at("lambda_hi").get<std::string>());
        seg.lambda_lo = quad_from_hex(s.at("lambda_lo").get<std::string>());
        seg.signs = s.at("signs").get<std::vector<int>>();
        seg.active = s.at("active").get<std::vector<std::size_t>>();
        seg.intercept = from_hex_array(s.at("intercept"));
        seg.slope = from_hex_array(s.at("slope"));
        if (seg.signs.size() != path.d || seg.intercept.size() != seg.active.size() ||
            seg.slope.size() != seg.active.size()) {
            throw FormatError("inconsistent segment record");
        }
        path.segments.push_back(std::move(seg));
    }
    if (j.at("count").get<std::size_t>() != path.segments.size()) throw FormatError("segment count mismatch");
    return path;
}

json bound_report_to_json(const BoundReport& r) {
    json subsets = json::array();
    for (const auto& b : r.subsets) {
        subsets.push_back({
            {"s", b.s},
            {"gamma_s", b.gamma.gamma_s},
            {"subsets_checked", b.gamma.subsets_checked},
            {"exhaustive", b.gamma.exhaustive},
            {"gamma_ratio", number_or_null(b.gamma_ratio)},
            {"thm2_value", number_or_null(b.thm2_value)},
            {"count_ratio", number_or_null(b.count_ratio)},
        });
    }
    return {
        {"schema_version", schema_version},
        {"kind", "bound_report"},
        {"constants", "universal constants set to 1 (bounds hold up to an unspecified constant)"},
        {"n", r.n},
        {"d", r.d},
        {"sigma", r.sigma},
        {"delta", r.delta},
        {"alpha", r.alpha},
        {"beta", r.beta},
        {"lipschitz_w", r.lipschitz_w},
        {"lipschitz_u", r.lipschitz_u},
        {"lw_limit", number_or_null(r.lw_limit)},
        {"lu_limit", number_or_null(r.lu_limit)},
        {"lw_ok", r.lw_ok},
        {"lu_ok", r.lu_ok},
        {"measured_count", r.measured_count},
        {"thm1_value", number_or_null(r.thm1_value)},
        {"thm1_ratio", number_or_null(r.thm1_ratio)},
        {"alpha_ratio", number_or_null(r.alpha_ratio)},
        {"max_kkt_violation", r.max_kkt_violation},
        {"subsets", subsets},
    };
}

json read_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw FormatError("cannot open " + file.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(file.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& file, const json& j) {
    write_text_file(file, j.dump(2) + "\n");
}

void write_text_file(const std::filesystem::path& file, const std::string& text) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    if (!out) throw FormatError("cannot write " + file.string());
    out << text;
}

}  // namespace lassopath
