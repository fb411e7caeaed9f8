#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "fgr/baselines.hpp"
#include "fgr/graph.hpp"
#include "fgr/matrix.hpp"

namespace fgr::io {

// Matrix: "FGM1", u64 p, u64 n, then p*n little-endian f64 in column-major
// order (20 + 8pn bytes). Decoding errors are ParseError with a byte offset.
std::string encode_matrix(const DataMatrix& X);
DataMatrix decode_matrix(std::string_view bytes);
void write_matrix(const DataMatrix& X, const std::filesystem::path& path);
DataMatrix read_matrix(const std::filesystem::path& path);

// CSV: header line "p,n", then a line with the two sizes, then p lines of n
// comma-separated values (one sample per column).
std::string format_matrix_csv(const DataMatrix& X);
DataMatrix parse_matrix_csv(std::string_view text);

/// Binary unless the extension is ".csv".
void save_matrix(const DataMatrix& X, const std::filesystem::path& path);
DataMatrix load_matrix(const std::filesystem::path& path);

// Graph: "p m", then one "i j" line per edge with i < j, 0-based.
std::string format_graph(const StructureGraph& g);
StructureGraph parse_graph(std::string_view text);
void write_graph(const StructureGraph& g, const std::filesystem::path& path);
StructureGraph read_graph(const std::filesystem::path& path);

// Partition: "p k", then the p cluster ids separated by single spaces.
std::string format_partition(const Partition& partition);
Partition parse_partition(std::string_view text);
void write_partition(const Partition& partition, const std::filesystem::path& path);
Partition read_partition(const std::filesystem::path& path);

// Reducer model: JSON {"variant", "k", "p", "payload"}. Grouping payloads
// carry {"partition": <partition text>}, random projections {"seed",
// "density"}, Nystrom maps {"indices", "map"}.
std::string model_to_json(const ReducerModel& model);
ReducerModel model_from_json(std::string_view text);
void write_model(const ReducerModel& model, const std::filesystem::path& path);
ReducerModel read_model(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace fgr::io
