#include <stdexcept>
#include <string>

#include "fgr/baselines.hpp"

namespace fgr {

const char* to_string(ReducerKind kind) noexcept {
  switch (kind) {
    case ReducerKind::feature_grouping: return "feature_grouping";
    case ReducerKind::nystrom: return "nystrom";
    case ReducerKind::random_projection: return "random_projection";
    case ReducerKind::downsampling: return "downsampling";
  }
  return "unknown";
}

ReducerKind reducer_kind_from_string(std::string_view name) {
  for (auto kind : {ReducerKind::feature_grouping, ReducerKind::nystrom, ReducerKind::random_projection,
                    ReducerKind::downsampling}) {
    if (name == to_string(kind)) return kind;
  }
  throw std::invalid_argument("unknown reducer variant '" + std::string(name) + "'");
}

ReducerModel::ReducerModel(ReducerKind kind, Payload payload) : kind_(kind), payload_(std::move(payload)) {
  bool grouping = std::holds_alternative<FeatureGroupingOperator>(payload_);
  bool ok = (kind == ReducerKind::feature_grouping || kind == ReducerKind::downsampling) ? grouping
            : kind == ReducerKind::nystrom ? std::holds_alternative<NystromMap>(payload_)
                                           : std::holds_alternative<SparseRandomProjection>(payload_);
  if (!ok) throw std::invalid_argument(std::string("ReducerModel: payload does not match variant ") + to_string(kind));
}

ReducerModel ReducerModel::feature_grouping(Partition partition) {
  return {ReducerKind::feature_grouping, FeatureGroupingOperator(std::move(partition))};
}

ReducerModel ReducerModel::downsampling(FeatureGroupingOperator op) {
  return {ReducerKind::downsampling, std::move(op)};
}

std::size_t ReducerModel::p() const noexcept {
  return std::visit([](const auto& m) { return m.p(); }, payload_);
}

std::size_t ReducerModel::k() const noexcept {
  return std::visit([](const auto& m) { return m.k(); }, payload_);
}

std::vector<double> ReducerModel::reduce(std::span<const double> x) const {
  return std::visit([&](const auto& m) { return m.reduce(x); }, payload_);
}

DataMatrix ReducerModel::reduce(const DataMatrix& X) const {
  return std::visit([&](const auto& m) { return m.reduce(X); }, payload_);
}

}  // namespace fgr
