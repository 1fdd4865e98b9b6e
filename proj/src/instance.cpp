#include "lassopath/instance.hpp"

#include "lassopath/errors.hpp"

namespace lassopath {

std::string_view to_string(VarianceMode mode) {
    return mode == VarianceMode::Scaled ? "scaled" : "per-entry";
}

VarianceMode parse_variance_mode(std::string_view name) {
    if (name == "per-entry") return VarianceMode::PerEntry;
    if (name == "scaled") return VarianceMode::Scaled;
    throw FormatError("unknown variance mode: " + std::string(name));
}

void ProblemInstance::validate() const {
    if (d() < 1) throw DomainError("instance needs at least one column");
    if (n() < d()) throw DomainError("instance needs n >= d");
    if (y.size() != n()) throw DomainError("target length does not match row count");
}

ProblemInstance ProblemInstance::from_double(const Matrix<double>& x, std::span<const double> y) {
    ProblemInstance inst;
    inst.x = x.cast<Real>();
    inst.y = cast_vector<Real>(y);
    return inst;
}

}  // namespace lassopath
