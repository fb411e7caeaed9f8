#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>

#include "fgr/error.hpp"
#include "fgr/io.hpp"
#include "oracles.hpp"

using namespace fgr;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("fgr_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

bool bit_equal(const DataMatrix& a, const DataMatrix& b) {
  return a.p() == b.p() && a.n() == b.n() &&
         std::memcmp(a.values().data(), b.values().data(), a.values().size() * sizeof(double)) == 0;
}

std::string mutate(std::string bytes, std::mt19937_64& rng, std::size_t header_length) {
  std::size_t at = rng() % header_length;
  auto old = static_cast<unsigned char>(bytes[at]);
  auto replacement = static_cast<unsigned char>(1 + rng() % 255);
  bytes[at] = static_cast<char>(static_cast<unsigned char>(old + replacement));  // never equal to old
  return bytes;
}

template <class F>
ParseError::Unit parse_error_unit(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.unit();
  }
  FAIL("expected ParseError");
  return ParseError::Unit::byte_offset;
}

}  // namespace

TEST_CASE("matrix binary layout") {
  DataMatrix X(1, 1);
  X(0, 0) = 3.5;
  auto bytes = io::encode_matrix(X);
  REQUIRE(bytes.size() == 28);
  CHECK(bytes.substr(0, 4) == "FGM1");
  CHECK(static_cast<unsigned char>(bytes[4]) == 1);
  CHECK(static_cast<unsigned char>(bytes[12]) == 1);
  double v;
  std::memcpy(&v, bytes.data() + 20, 8);
  CHECK(v == 3.5);

  DataMatrix Y(2, 3);
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t i = 0; i < 2; ++i) Y(i, s) = static_cast<double>(10 * s + i);
  auto b = io::encode_matrix(Y);
  CHECK(b.size() == 20 + 8 * 6);
  std::memcpy(&v, b.data() + 20 + 8 * 3, 8);  // column-major: entry (1, 1)
  CHECK(v == 11.0);
}

TEST_CASE("matrix round trips bit-exactly") {
  std::mt19937_64 rng(70);
  TempDir dir;
  for (int trial = 0; trial < 20; ++trial) {
    auto X = testing::random_matrix(rng, 100, 7);
    X(0, 0) = -0.0;
    X(1, 0) = std::numeric_limits<double>::denorm_min();
    X(2, 0) = std::numeric_limits<double>::max();
    CHECK(bit_equal(io::decode_matrix(io::encode_matrix(X)), X));
    io::write_matrix(X, dir.path / "m.fgm");
    CHECK(bit_equal(io::read_matrix(dir.path / "m.fgm"), X));
    io::save_matrix(X, dir.path / "m.csv");
    CHECK(bit_equal(io::load_matrix(dir.path / "m.csv"), X));
  }
}

TEST_CASE("matrix decoding errors") {
  DataMatrix X(3, 2);
  auto bytes = io::encode_matrix(X);
  try {
    io::decode_matrix(std::string_view(bytes).substr(0, bytes.size() - 5));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    std::string what = e.what();
    CHECK(what.find("68") != std::string::npos);  // expected length
    CHECK(what.find("63") != std::string::npos);  // actual length
  }
  CHECK_THROWS_AS(io::decode_matrix(bytes + "x"), ParseError);
  CHECK_THROWS_AS(io::decode_matrix(bytes.substr(0, 10)), ParseError);
  auto bad = bytes;
  bad[0] = 'X';
  CHECK(parse_error_unit([&] { io::decode_matrix(bad); }) == ParseError::Unit::byte_offset);
  auto nan = bytes;
  double q = std::nan("");
  std::memcpy(nan.data() + 28, &q, 8);
  CHECK_THROWS_AS(io::decode_matrix(nan), ParseError);
  CHECK_THROWS_AS(io::read_matrix("/nonexistent/fgr/file"), std::runtime_error);
}

TEST_CASE("matrix csv") {
  DataMatrix X(2, 2);
  X(0, 0) = 1;
  X(1, 0) = 2;
  X(0, 1) = 0.5;
  X(1, 1) = -3;
  CHECK(io::format_matrix_csv(X) == "p,n\n2,2\n1,0.5\n2,-3\n");
  CHECK(io::parse_matrix_csv("p,n\n2,2\n1,0.5\n2,-3\n") == X);
  CHECK_THROWS_AS(io::parse_matrix_csv("p,n\n2,2\n1,0.5\n2\n"), ParseError);
  CHECK_THROWS_AS(io::parse_matrix_csv("p,n\n2,2\n1,0.5\n"), ParseError);
  CHECK_THROWS_AS(io::parse_matrix_csv("q,n\n1,1\n1\n"), ParseError);
}

TEST_CASE("graph text") {
  std::array<std::size_t, 1> dims{3};
  auto chain = build_lattice_graph(dims);
  CHECK(io::format_graph(chain) == "3 2\n0 1\n1 2\n");
  auto back = io::parse_graph("3 2\n0 1\n1 2\n");
  CHECK(std::vector<Edge>(back.edges().begin(), back.edges().end()) ==
        std::vector<Edge>(chain.edges().begin(), chain.edges().end()));
  CHECK(io::format_graph(io::parse_graph("4 0\n")) == "4 0\n");

  CHECK(parse_error_unit([] { io::parse_graph("3 1\n2 2\n"); }) == ParseError::Unit::line);
  CHECK_THROWS_AS(io::parse_graph("3 2\n0 1\n0 1\n"), ParseError);
  CHECK_THROWS_AS(io::parse_graph("3 1\n0 3\n"), ParseError);
  CHECK_THROWS_AS(io::parse_graph("3 1\n1 0\n"), ParseError);
  CHECK_THROWS_AS(io::parse_graph("3 2\n0 1\n"), ParseError);
  CHECK_THROWS_AS(io::parse_graph("3 1\n0  1\n"), ParseError);
  try {
    io::parse_graph("3 2\n0 1\n2 2\n");
  } catch (const ParseError& e) {
    CHECK(e.location() == 3);
  }

  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = testing::random_graph(rng, 1 + rng() % 40, 0.2);
    auto text = io::format_graph(g);
    CHECK(io::format_graph(io::parse_graph(text)) == text);
  }
}

TEST_CASE("partition text") {
  Partition u({0, 0, 1}, 2);
  CHECK(io::format_partition(u) == "3 2\n0 0 1\n");
  CHECK(io::parse_partition("3 2\n0 0 1\n") == u);
  CHECK_THROWS_AS(io::parse_partition("3 3\n0 0 1\n"), ParseError);  // id 2 unused
  CHECK_THROWS_AS(io::parse_partition("3 2\n0 0 2\n"), ParseError);
  CHECK_THROWS_AS(io::parse_partition("3 2\n0 0\n"), ParseError);
  CHECK_THROWS_AS(io::parse_partition("3 2\n0 0 01\n"), ParseError);

  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t p = 1 + rng() % 200;
    auto v = testing::random_partition(rng, p, 1 + rng() % p);
    CHECK(io::parse_partition(io::format_partition(v)) == v);
  }
}

TEST_CASE("model json round trips") {
  std::mt19937_64 rng(73);
  auto X = testing::random_matrix(rng, 12, 5);
  std::vector<ReducerModel> models{
      ReducerModel::feature_grouping(testing::random_partition(rng, 12, 4)),
      ReducerModel::downsampling(FeatureGroupingOperator(Partition({0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3}, 4))),
      ReducerModel(ReducerKind::random_projection, SparseRandomProjection(12, 3, 99)),
      ReducerModel(ReducerKind::nystrom, nystrom_fit(X, 3, 4)),
  };
  TempDir dir;
  for (const auto& m : models) {
    auto text = io::model_to_json(m);
    auto back = io::model_from_json(text);
    CHECK(back.kind() == m.kind());
    CHECK(io::model_to_json(back) == text);
    CHECK(bit_equal(back.reduce(X), m.reduce(X)));
    io::write_model(m, dir.path / "model.json");
    CHECK(io::model_to_json(io::read_model(dir.path / "model.json")) == text);
  }
  CHECK_THROWS_AS(io::model_from_json("{"), ParseError);
  CHECK_THROWS_AS(io::model_from_json(R"({"variant":"pca","k":1,"p":1,"payload":{}})"), ParseError);
  CHECK_THROWS_AS(io::model_from_json(R"({"variant":"feature_grouping","k":2,"p":3,"payload":{"partition":"3 1\n0 0 0\n"}})"),
                  ParseError);
}

TEST_CASE("header mutations are rejected") {
  std::mt19937_64 rng(74);
  auto X = testing::random_matrix(rng, 9, 4);
  auto bytes = io::encode_matrix(X);
  auto partition_text = io::format_partition(Partition({0, 1, 1, 2, 0, 2, 3, 3, 1, 4, 4, 0}, 5));
  const std::size_t partition_header = partition_text.find('\n') + 1;
  for (int trial = 0; trial < 500; ++trial) {
    CHECK_THROWS_AS(io::decode_matrix(mutate(bytes, rng, 20)), ParseError);
    CHECK_THROWS_AS(io::parse_partition(mutate(partition_text, rng, partition_header)), ParseError);
  }
}

TEST_CASE("graph header mutations never misread") {
  // A larger vertex count still describes a valid graph, so the property is
  // that a mutated header is either rejected or read exactly as written.
  std::mt19937_64 rng(75);
  std::array<std::size_t, 2> dims{3, 4};
  auto text = io::format_graph(build_lattice_graph(dims));
  const std::size_t header = text.find('\n') + 1;
  std::size_t accepted = 0;
  for (int trial = 0; trial < 500; ++trial) {
    auto mutated = mutate(text, rng, header);
    try {
      auto g = io::parse_graph(mutated);
      CHECK(io::format_graph(g) == mutated);
      ++accepted;
    } catch (const ParseError&) {
    }
  }
  CHECK(accepted < 100);
}
