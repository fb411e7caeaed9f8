#include "fgr/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "fgr/error.hpp"

namespace fgr::io {

namespace {

constexpr std::string_view kMagic = "FGM1";
constexpr std::size_t kHeaderBytes = 20;

void put_u64(std::string& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

std::uint64_t get_u64(std::string_view bytes, std::size_t offset) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= std::uint64_t{static_cast<unsigned char>(bytes[offset + b])} << (8 * b);
  return v;
}

[[noreturn]] void fail_line(const std::string& what, std::size_t line) {
  throw ParseError(what, line, ParseError::Unit::line);
}

[[noreturn]] void fail_byte(const std::string& what, std::size_t offset) {
  throw ParseError(what, offset, ParseError::Unit::byte_offset);
}

// Strict unsigned decimal: digits only, no sign, no leading zeros.
bool parse_index(std::string_view token, std::size_t& out) {
  if (token.empty() || (token.size() > 1 && token[0] == '0')) return false;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc{} && ptr == token.data() + token.size();
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

// Lines of a text file; a single trailing newline is allowed, and required
// when `need_final_newline` is set.
std::vector<std::string_view> text_lines(std::string_view text) {
  if (text.empty()) fail_line("empty input", 1);
  if (text.back() == '\n') text.remove_suffix(1);
  return split(text, '\n');
}

std::pair<std::size_t, std::size_t> parse_pair(std::string_view line, std::size_t lineno, const char* what) {
  auto parts = split(line, ' ');
  std::size_t a = 0, b = 0;
  if (parts.size() != 2 || !parse_index(parts[0], a) || !parse_index(parts[1], b))
    fail_line(std::string("expected '") + what + "', got '" + std::string(line) + "'", lineno);
  return {a, b};
}

std::string format_double(double v) {
  char buf[32];
  int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return {buf, static_cast<std::size_t>(len)};
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

// Matrix -------------------------------------------------------------------------

std::string encode_matrix(const DataMatrix& X) {
  std::string out;
  out.reserve(kHeaderBytes + 8 * X.values().size());
  out.append(kMagic);
  put_u64(out, X.p());
  put_u64(out, X.n());
  for (double v : X.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

DataMatrix decode_matrix(std::string_view bytes) {
  if (bytes.size() < kMagic.size() || bytes.substr(0, kMagic.size()) != kMagic) fail_byte("bad magic, expected FGM1", 0);
  if (bytes.size() < kHeaderBytes) {
    fail_byte("truncated header: expected " + std::to_string(kHeaderBytes) + " bytes, got " +
                  std::to_string(bytes.size()),
              bytes.size());
  }
  const std::uint64_t p = get_u64(bytes, 4);
  const std::uint64_t n = get_u64(bytes, 12);
  if (p == 0) fail_byte("p must be >= 1", 4);
  if (n == 0) fail_byte("n must be >= 1", 12);
  std::uint64_t count = 0, payload = 0;
  if (__builtin_mul_overflow(p, n, &count) || __builtin_mul_overflow(count, std::uint64_t{8}, &payload) ||
      payload > std::numeric_limits<std::uint64_t>::max() - kHeaderBytes) {
    fail_byte("declared size p*n overflows", 4);
  }
  const std::size_t actual = bytes.size() - kHeaderBytes;
  if (actual < payload) {
    fail_byte("truncated file: expected " + std::to_string(kHeaderBytes + payload) + " bytes, got " +
                  std::to_string(bytes.size()),
              bytes.size());
  }
  if (actual > payload) {
    fail_byte("size mismatch: expected " + std::to_string(kHeaderBytes + payload) + " bytes, got " +
                  std::to_string(bytes.size()),
              kHeaderBytes + payload);
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t offset = kHeaderBytes + 8 * i;
    values[i] = std::bit_cast<double>(get_u64(bytes, offset));
    if (!std::isfinite(values[i])) fail_byte("non-finite value", offset);
  }
  return DataMatrix(p, n, std::move(values));
}

void write_matrix(const DataMatrix& X, const std::filesystem::path& path) { write_file(path, encode_matrix(X)); }

DataMatrix read_matrix(const std::filesystem::path& path) { return decode_matrix(read_file(path)); }

std::string format_matrix_csv(const DataMatrix& X) {
  std::string out = "p,n\n" + std::to_string(X.p()) + "," + std::to_string(X.n()) + "\n";
  for (std::size_t i = 0; i < X.p(); ++i) {
    for (std::size_t s = 0; s < X.n(); ++s) {
      if (s) out.push_back(',');
      out += format_double(X(i, s));
    }
    out.push_back('\n');
  }
  return out;
}

DataMatrix parse_matrix_csv(std::string_view text) {
  auto lines = text_lines(text);
  if (lines[0] != "p,n") fail_line("expected header 'p,n'", 1);
  if (lines.size() < 2) fail_line("missing size line", 2);
  auto sizes = split(lines[1], ',');
  std::size_t p = 0, n = 0;
  if (sizes.size() != 2 || !parse_index(sizes[0], p) || !parse_index(sizes[1], n) || p == 0 || n == 0)
    fail_line("expected '<p>,<n>' with p, n >= 1", 2);
  if (lines.size() != p + 2) {
    fail_line("expected " + std::to_string(p) + " data rows, got " + std::to_string(lines.size() - 2),
              std::min(lines.size(), p + 2) + 1);
  }
  DataMatrix X(p, n);
  for (std::size_t i = 0; i < p; ++i) {
    auto cells = split(lines[i + 2], ',');
    if (cells.size() != n) fail_line("expected " + std::to_string(n) + " values", i + 3);
    for (std::size_t s = 0; s < n; ++s) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cells[s].data(), cells[s].data() + cells[s].size(), v);
      if (ec != std::errc{} || ptr != cells[s].data() + cells[s].size() || !std::isfinite(v))
        fail_line("bad value '" + std::string(cells[s]) + "'", i + 3);
      X(i, s) = v;
    }
  }
  return X;
}

void save_matrix(const DataMatrix& X, const std::filesystem::path& path) {
  if (path.extension() == ".csv")
    write_file(path, format_matrix_csv(X));
  else
    write_matrix(X, path);
}

DataMatrix load_matrix(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? parse_matrix_csv(read_file(path)) : read_matrix(path);
}

// Graph --------------------------------------------------------------------------

std::string format_graph(const StructureGraph& g) {
  std::string out = std::to_string(g.vertex_count()) + " " + std::to_string(g.edge_count()) + "\n";
  for (const Edge& e : g.edges()) out += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
  return out;
}

StructureGraph parse_graph(std::string_view text) {
  auto lines = text_lines(text);
  auto [p, m] = parse_pair(lines[0], 1, "p m");
  if (lines.size() - 1 != m) {
    fail_line("header declares " + std::to_string(m) + " edges, found " + std::to_string(lines.size() - 1),
              std::min(lines.size(), m + 1) + (lines.size() > m + 1 ? 1 : 0));
  }
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t l = 1; l < lines.size(); ++l) {
    auto [u, v] = parse_pair(lines[l], l + 1, "i j");
    if (u >= p || v >= p) fail_line("vertex out of range for p = " + std::to_string(p), l + 1);
    if (u == v) fail_line("self-loop on vertex " + std::to_string(u), l + 1);
    if (u > v) fail_line("edge must be written with i < j", l + 1);
    edges.push_back({u, v});
  }
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return edges[a] < edges[b] || (edges[a] == edges[b] && a < b); });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (edges[order[i]] == edges[order[i - 1]]) fail_line("duplicate edge", order[i] + 2);
  }
  return StructureGraph::from_edges(p, edges);
}

void write_graph(const StructureGraph& g, const std::filesystem::path& path) { write_file(path, format_graph(g)); }

StructureGraph read_graph(const std::filesystem::path& path) { return parse_graph(read_file(path)); }

// Partition ------------------------------------------------------------------------

std::string format_partition(const Partition& partition) {
  std::string out = std::to_string(partition.p()) + " " + std::to_string(partition.k()) + "\n";
  for (std::size_t i = 0; i < partition.p(); ++i) {
    if (i) out.push_back(' ');
    out += std::to_string(partition[i]);
  }
  out.push_back('\n');
  return out;
}

Partition parse_partition(std::string_view text) {
  auto lines = text_lines(text);
  auto [p, k] = parse_pair(lines[0], 1, "p k");
  if (p == 0 || k == 0 || k > p) fail_line("need 1 <= k <= p", 1);
  if (lines.size() != 2) fail_line("expected exactly one line of cluster ids", std::min<std::size_t>(lines.size(), 2) + 1);
  auto tokens = split(lines[1], ' ');
  if (tokens.size() != p) fail_line("expected " + std::to_string(p) + " cluster ids, got " + std::to_string(tokens.size()), 2);
  std::vector<std::size_t> ids(p);
  std::vector<bool> seen(k, false);
  for (std::size_t i = 0; i < p; ++i) {
    if (!parse_index(tokens[i], ids[i])) fail_line("bad cluster id '" + std::string(tokens[i]) + "'", 2);
    if (ids[i] >= k) fail_line("cluster id " + std::to_string(ids[i]) + " >= k", 2);
    seen[ids[i]] = true;
  }
  for (std::size_t q = 0; q < k; ++q)
    if (!seen[q]) fail_line("cluster ids are not dense: " + std::to_string(q) + " unused", 2);
  return Partition(std::move(ids), k);
}

void write_partition(const Partition& partition, const std::filesystem::path& path) {
  write_file(path, format_partition(partition));
}

Partition read_partition(const std::filesystem::path& path) { return parse_partition(read_file(path)); }

// Reducer model --------------------------------------------------------------------

std::string model_to_json(const ReducerModel& model) {
  nlohmann::json payload;
  if (auto* op = std::get_if<FeatureGroupingOperator>(&model.payload())) {
    payload["partition"] = format_partition(op->partition());
  } else if (auto* rp = std::get_if<SparseRandomProjection>(&model.payload())) {
    payload["seed"] = rp->seed();
    payload["density"] = rp->density();
  } else {
    const auto& nys = std::get<NystromMap>(model.payload());
    payload["indices"] = std::vector<std::size_t>(nys.indices().begin(), nys.indices().end());
    payload["map"] = std::vector<double>(nys.map().begin(), nys.map().end());
  }
  nlohmann::json doc{{"variant", to_string(model.kind())}, {"k", model.k()}, {"p", model.p()}, {"payload", payload}};
  return doc.dump(2) + "\n";
}

ReducerModel model_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    auto kind = reducer_kind_from_string(doc.at("variant").get<std::string>());
    auto k = doc.at("k").get<std::size_t>();
    auto p = doc.at("p").get<std::size_t>();
    const auto& payload = doc.at("payload");
    auto check = [&](const ReducerModel& m) {
      if (m.k() != k || m.p() != p) throw std::invalid_argument("envelope k/p disagree with payload");
      return m;
    };
    switch (kind) {
      case ReducerKind::feature_grouping:
      case ReducerKind::downsampling:
        return check(ReducerModel(kind, FeatureGroupingOperator(parse_partition(payload.at("partition").get<std::string>()))));
      case ReducerKind::random_projection: {
        SparseRandomProjection rp(p, k, payload.at("seed").get<std::uint64_t>());
        if (payload.at("density").get<double>() != rp.density())
          throw std::invalid_argument("projection density disagrees with p");
        return check(ReducerModel(kind, std::move(rp)));
      }
      case ReducerKind::nystrom:
        return check(ReducerModel(kind, NystromMap(p, payload.at("indices").get<std::vector<std::size_t>>(),
                                                   payload.at("map").get<std::vector<double>>())));
    }
  } catch (const ParseError& e) {
    throw ParseError(std::string("model payload: ") + e.what(), 0, ParseError::Unit::byte_offset);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), e.byte, ParseError::Unit::byte_offset);
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid model: ") + e.what(), 0, ParseError::Unit::byte_offset);
  }
  throw ParseError("invalid model", 0, ParseError::Unit::byte_offset);
}

void write_model(const ReducerModel& model, const std::filesystem::path& path) { write_file(path, model_to_json(model)); }

ReducerModel read_model(const std::filesystem::path& path) { return model_from_json(read_file(path)); }

}  // namespace fgr::io
