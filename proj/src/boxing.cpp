#include "ipapprox/boxing.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace ipapprox {

Rat snap_delta(const Rat& delta) {
  if (sgn(delta) <= 0) throw std::invalid_argument("delta must be positive");
  Rat snapped(1);
  snapped /= Rat(ceil(Rat(1 / delta)));
  return snapped;
}

BoxIndex box_index(const RatVector& v, const Rat& delta, const Rat& scale) {
  if (sgn(scale) <= 0) throw std::invalid_argument("box_index: scale must be positive");
  const Rat d = snap_delta(delta);
  const Int cells = ceil(Rat(1 / d));
  const Rat side = d * scale;
  BoxIndex idx(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (abs(v[i]) > scale) {
      throw std::invalid_argument("box_index: coordinate " + std::to_string(i) + " exceeds scale");
    }
    Int lambda = ceil(Rat(v[i] / side));
    if (lambda < 1 - cells) lambda = 1 - cells;
    if (lambda > cells) lambda = cells;
    idx[i] = lambda;
  }
  return idx;
}

RatVector canonical_vector(const BoxIndex& idx, const Rat& delta, const Rat& scale) {
  const Rat side = snap_delta(delta) * scale;
  RatVector out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = Rat(idx[i] - 1) * side;
  return out;
}

BoxPartition partition_vectors(const std::vector<RatVector>& vectors, const Rat& delta,
                               const Rat& scale) {
  BoxPartition part;
  part.delta = snap_delta(delta);
  part.scale = scale;
  std::map<BoxIndex, std::vector<std::size_t>> occupied;
  std::vector<BoxIndex> indices;
  indices.reserve(vectors.size());
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    indices.push_back(box_index(vectors[j], part.delta, scale));
    occupied[indices.back()].push_back(j);
  }
  std::map<BoxIndex, std::size_t> position;
  for (auto& [idx, members] : occupied) {
    position[idx] = part.groups.size();
    part.groups.push_back({idx, std::move(members), canonical_vector(idx, part.delta, scale)});
  }
  part.column_group.resize(vectors.size());
  part.residuals.resize(vectors.size());
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    const std::size_t g = position.at(indices[j]);
    part.column_group[j] = g;
    RatVector r = vectors[j];
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= part.groups[g].canonical[i];
    part.residuals[j] = std::move(r);
  }
  return part;
}

BoxPartition partition_columns(const RatMatrix& H, const Rat& delta) {
  Rat scale = inf_norm(H);
  if (sgn(scale) == 0) scale = 1;
  std::vector<RatVector> cols;
  cols.reserve(H.cols());
  for (std::size_t j = 0; j < H.cols(); ++j) cols.push_back(H.column(j));
  return partition_vectors(cols, delta, scale);
}

ConfigBoxPartition partition_config_columns(const std::vector<RatMatrix>& dcal, const Rat& delta) {
  Rat scale = 0;
  for (const auto& m : dcal) scale = std::max(scale, inf_norm(m));
  if (sgn(scale) == 0) scale = 1;
  return partition_config_columns(dcal, delta, scale);
}

ConfigBoxPartition partition_config_columns(const std::vector<RatMatrix>& dcal, const Rat& delta,
                                            const Rat& scale) {
  ConfigBoxPartition part;
  part.delta = snap_delta(delta);
  part.scale = scale;
  if (!dcal.empty()) {
    for (const auto& m : dcal) {
      if (m.rows() != dcal.front().rows() || m.cols() != dcal.front().cols()) {
        throw std::invalid_argument("partition_config_columns: matrices differ in shape");
      }
    }
  }
  std::map<std::vector<BoxIndex>, std::vector<std::size_t>> occupied;
  std::vector<std::vector<BoxIndex>> keys;
  for (std::size_t i = 0; i < dcal.size(); ++i) {
    std::vector<BoxIndex> key;
    for (std::size_t c = 0; c < dcal[i].cols(); ++c) key.push_back(box_index(dcal[i].column(c), part.delta, scale));
    occupied[key].push_back(i);
    keys.push_back(std::move(key));
  }
  std::map<std::vector<BoxIndex>, std::size_t> position;
  for (auto& [key, members] : occupied) {
    position[key] = part.types.size();
    TypeGroup g;
    g.key = key;
    g.members = std::move(members);
    for (const auto& idx : key) g.canonicals.push_back(canonical_vector(idx, part.delta, scale));
    part.types.push_back(std::move(g));
  }
  part.block_type.resize(dcal.size());
  for (std::size_t i = 0; i < dcal.size(); ++i) {
    const std::size_t k = position.at(keys[i]);
    part.block_type[i] = k;
    RatMatrix r = dcal[i];
    for (std::size_t c = 0; c < r.cols(); ++c)
      for (std::size_t row = 0; row < r.rows(); ++row) r(row, c) -= part.types[k].canonicals[c][row];
    part.residuals.push_back(std::move(r));
  }
  return part;
}

}  // namespace ipapprox
