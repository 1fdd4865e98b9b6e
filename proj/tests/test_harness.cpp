#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "lassopath/bounds.hpp"
#include "lassopath/errors.hpp"
#include "lassopath/harness.hpp"
#include "lassopath/homotopy.hpp"
#include "lassopath/instance_lab.hpp"
#include "lassopath/records.hpp"

using namespace lassopath;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "lassopath-tests";
    fs::create_directories(dir);
    return dir / name;
}

void write_bytes(const fs::path& file, const std::vector<unsigned char>& bytes) {
    std::ofstream out(file, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

ImageDataset tiny_dataset() {
    ImageDataset images;
    images.count = 2;
    images.rows = 3;
    images.cols = 3;
    for (unsigned v = 0; v < 18; ++v) images.pixels.push_back(static_cast<std::uint8_t>(v * 14 + 3));
    return images;
}

const fs::path mnist_file = fs::path(LASSOPATH_DATA_DIR) / "mnist5k-images-idx3-ubyte";

}  // namespace

TEST_CASE("instance records round-trip bit for bit") {
    SmoothingSpec spec;
    spec.sigma = 1e-17;
    spec.seed = 4;
    spec.trial_index = 2;
    const ProblemInstance inst = smooth(gen_adversarial(5), spec);
    const nlohmann::json j = instance_to_json(inst);
    CHECK(j["schema_version"] == schema_version);
    const ProblemInstance back = instance_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back == inst);
    CHECK(solve_path(back).count() == solve_path(inst).count());
}

TEST_CASE("path records round-trip and reject inconsistent payloads") {
    const ProblemInstance inst = gen_gaussian(9, 5, 7);
    const RegularizationPath path = solve_path(inst);
    const nlohmann::json j = path_to_json(path);
    const RegularizationPath back = path_from_json(nlohmann::json::parse(j.dump()));
    REQUIRE(back.count() == path.count());
    CHECK(back.lambda_max == path.lambda_max);
    for (std::size_t k = 0; k < path.count(); ++k) {
        CHECK(back.segments[k].lambda_lo == path.segments[k].lambda_lo);
        CHECK(back.segments[k].signs == path.segments[k].signs);
        CHECK(back.segments[k].intercept == path.segments[k].intercept);
        CHECK(back.segments[k].slope == path.segments[k].slope);
    }
    nlohmann::json bad = j;
    bad["count"] = path.count() + 1;
    CHECK_THROWS_AS(path_from_json(bad), FormatError);
    bad = j;
    bad["kind"] = "instance";
    CHECK_THROWS_AS(path_from_json(bad), FormatError);
    bad = j;
    bad["schema_version"] = 99;
    CHECK_THROWS_AS(path_from_json(bad), FormatError);
}

TEST_CASE("records survive the file helpers") {
    const ProblemInstance inst = gen_gaussian(6, 3, 2);
    const fs::path file = scratch("nested/dir/instance.json");
    fs::remove_all(file.parent_path());
    write_json_file(file, instance_to_json(inst));
    CHECK(instance_from_json(read_json_file(file)) == inst);
    write_text_file(scratch("garbage.json"), "{not json");
    CHECK_THROWS_AS(read_json_file(scratch("garbage.json")), FormatError);
    CHECK_THROWS_AS(read_json_file(scratch("missing.json")), FormatError);
}

TEST_CASE("bound reports serialize undefined values as null") {
    const ProblemInstance inst = gen_gaussian(10, 4, 1);
    const nlohmann::json j = bound_report_to_json(instance_bound_report(inst, 0.1, {2}));
    CHECK(j["thm1_value"].is_null());
    CHECK(j["subsets"][0]["thm2_value"].is_null());
    CHECK(j["alpha"].is_number());
}

TEST_CASE("IDX fixture round-trips exactly") {
    const ImageDataset images = tiny_dataset();
    const fs::path file = scratch("tiny-idx3-ubyte");
    write_idx_images(file, images);
    CHECK(fs::file_size(file) == 16 + 18);
    const ImageDataset back = load_idx_images(file);
    CHECK(back.count == 2);
    CHECK(back.rows == 3);
    CHECK(back.cols == 3);
    CHECK(back.pixels == images.pixels);
    CHECK(back.at(1, 2, 0) == images.pixels[9 + 6]);
    CHECK(back.sha256.size() == 64);
}

TEST_CASE("IDX header is parsed big-endian") {
    const fs::path file = scratch("handmade-idx3-ubyte");
    write_bytes(file, {0, 0, 8, 3, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 2, 0, 255, 128, 7});
    const ImageDataset images = load_idx_images(file);
    CHECK(images.count == 1);
    CHECK(images.rows == 2);
    CHECK(images.pixels == std::vector<std::uint8_t>{0, 255, 128, 7});
}

TEST_CASE("IDX errors") {
    const fs::path file = scratch("broken-idx3-ubyte");
    write_bytes(file, {0, 0, 8, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 9});
    CHECK_THROWS_AS(load_idx_images(file), BadMagic);
    write_bytes(file, {0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2, 1, 2, 3});
    CHECK_THROWS_AS(load_idx_images(file), TruncatedFile);
    write_bytes(file, {0, 0, 8, 3, 0, 0});
    CHECK_THROWS_AS(load_idx_images(file), TruncatedFile);
    write_bytes(file, {0, 0});
    CHECK_THROWS_AS(load_idx_images(file), TruncatedFile);
}

TEST_CASE("bundled image subset has the expected header and digest") {
    const ImageDataset images = load_idx_images(mnist_file);
    CHECK(images.count == 5000);
    CHECK(images.rows == 28);
    CHECK(images.cols == 28);
    CHECK(images.sha256 == "a4a9358b9ba319305e7cd69b2c7410e463401e152d7e9e60189b94a3f159d012");
}

TEST_CASE("patch instances") {
    const ImageDataset images = load_idx_images(mnist_file);
    const ProblemInstance a = mnist_patch_instance(images, 200, 3, 5, 0);
    CHECK(a.n() == 200);
    CHECK(a.d() <= 8);
    CHECK(std::fabs(to_double(norm2<Real>(a.y)) - 1.0) <= 1e-12);
    for (std::size_t j = 0; j < a.d(); ++j) CHECK(norm_inf<Real>(a.x.col(j)) > Real(0));
    for (const auto& v : a.x.data()) {
        REQUIRE(v >= Real(0));
        REQUIRE(v <= Real(1));
    }
    CHECK(mnist_patch_instance(images, 200, 3, 5, 0) == a);
    CHECK_FALSE(mnist_patch_instance(images, 200, 3, 5, 0, 1) == a);
    CHECK_FALSE(mnist_patch_instance(images, 200, 3, 5, 1) == a);
    CHECK_THROWS_AS(mnist_patch_instance(images, 200, 4, 5, 0), DomainError);
    CHECK_THROWS_AS(mnist_patch_instance(images, 200, 1, 5, 0), DomainError);
    CHECK_THROWS_AS(mnist_patch_instance(images, 40, 7, 5, 0), DomainError);
    CHECK_THROWS_AS(mnist_patch_instance(images, 6000, 3, 5, 0), DomainError);
}

TEST_CASE("mnist experiment is deterministic and independent of the worker count") {
    const ImageDataset images = load_idx_images(mnist_file);
    MnistOptions opts;
    opts.n = 100;
    opts.patch_sizes = {3, 5};
    opts.trials = 3;
    opts.seed = 11;
    opts.workers = 1;
    const MnistResult a = run_mnist(images, opts);
    opts.workers = 3;
    const MnistResult b = run_mnist(images, opts);
    CHECK(mnist_csv(a) == mnist_csv(b));
    for (std::size_t k = 0; k < a.records.size(); ++k) CHECK(a.records[k].segment_count == b.records[k].segment_count);
    CHECK(a.rows[0].feature_dim == 8);
    CHECK(a.rows[1].feature_dim == 24);
    CHECK(std::isfinite(a.slope_vs_dim));
    CHECK(mnist_json(a)["dataset_sha256"] == images.sha256);
}

TEST_CASE("count table wide CSV layout") {
    Table1Options opts;
    opts.dims = {3, 4};
    opts.neg_log10_sigmas = {2, std::nullopt};
    opts.trials = 4;
    opts.seed = 1;
    const Table1Result result = run_table1(opts);
    const std::string csv = table1_csv(result);
    CHECK(csv.rfind("neg_log10_sigma,d=3,d=4\n2,", 0) == 0);
    CHECK(csv.find("\ninf,14.00,41.00\n") != std::string::npos);
    CHECK(result.cell(4, std::nullopt).trials == 1);
    CHECK(result.cell(4, 2).trials == 4);
    CHECK(result.cell(4, 2).min <= result.cell(4, 2).max);
    CHECK_THROWS_AS(result.cell(5, 2), DomainError);
    const nlohmann::json j = table1_json(result);
    CHECK(j["records"].size() == 2 * 4 + 2);
    CHECK(table1_cells_csv(result).rfind("d,neg_log10_sigma,trials,failed,mean,stddev,min,max\n", 0) == 0);
}

TEST_CASE("count table is reproducible across worker counts") {
    Table1Options opts;
    opts.dims = {4, 5};
    opts.neg_log10_sigmas = {1, 6};
    opts.trials = 6;
    opts.seed = 3;
    opts.workers = 1;
    const std::string serial = table1_csv(run_table1(opts));
    opts.workers = 4;
    CHECK(table1_csv(run_table1(opts)) == serial);
    opts.seed = 4;
    CHECK(table1_csv(run_table1(opts)) != serial);
}

TEST_CASE("count table marks failing cells instead of aborting") {
    Table1Options opts;
    opts.dims = {8};
    opts.neg_log10_sigmas = {std::nullopt};
    opts.precision = PrecisionMode::Standard;
    const Table1Result result = run_table1(opts);
    const Table1Cell& cell = result.cell(8, std::nullopt);
    CHECK(cell.failed == 1);
    CHECK_FALSE(cell.error.empty());
    CHECK(table1_csv(result) == "neg_log10_sigma,d=8\ninf,FAILED\n");
}

TEST_CASE("count table argument checks") {
    Table1Options opts;
    opts.dims = {11};
    opts.neg_log10_sigmas = {std::nullopt};
    CHECK_THROWS_AS(run_table1(opts), DomainError);
    opts.dims = {4};
    opts.trials = 0;
    CHECK_THROWS_AS(run_table1(opts), DomainError);
}

TEST_CASE("sigma lists") {
    const auto v = parse_sigma_list("0,2,inf,10");
    REQUIRE(v.size() == 4);
    CHECK(v[0] == 0);
    CHECK(v[1] == 2);
    CHECK_FALSE(v[2].has_value());
    CHECK(v[3] == 10);
    CHECK_THROWS_AS(parse_sigma_list("2,x"), FormatError);
    CHECK_THROWS_AS(parse_sigma_list("2.5"), FormatError);
}

TEST_CASE("log-log slope") {
    CHECK(log_log_slope({1, 2, 4, 8}, {3, 6, 12, 24}) == doctest::Approx(1.0));
    CHECK(log_log_slope({2, 3, 5}, {4, 9, 25}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(log_log_slope({1}, {1}), DomainError);
    CHECK_THROWS_AS(log_log_slope({1, 0}, {1, 1}), DomainError);
}

TEST_CASE("default output directory follows the environment") {
    ::unsetenv("LASSOPATH_OUT");
    CHECK(default_output_dir() == fs::path("results"));
    ::setenv("LASSOPATH_OUT", "/tmp/elsewhere", 1);
    CHECK(default_output_dir() == fs::path("/tmp/elsewhere"));
    ::unsetenv("LASSOPATH_OUT");
}

TEST_CASE("plot scripts read the CSV layouts") {
    CHECK(table1_plot_script().find("table1.csv") != std::string::npos);
    CHECK(mnist_plot_script().find("feature_dim") != std::string::npos);
}
