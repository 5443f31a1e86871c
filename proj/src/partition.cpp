#include "dci/partition.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dci {

Partition Partition::singletons(std::size_t degree) {
  std::vector<std::size_t> labels(degree);
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  return from_labels(labels);
}

Partition Partition::whole(std::size_t degree) {
  std::vector<std::size_t> labels(degree, 0);
  return from_labels(labels);
}

Partition Partition::from_blocks(std::size_t degree, std::vector<std::vector<Point>> blocks) {
  std::vector<std::size_t> labels(degree, blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw std::invalid_argument("empty block");
    for (Point y : blocks[b]) {
      if (y >= degree) throw std::invalid_argument("block point out of range");
      if (labels[y] != blocks.size()) throw std::invalid_argument("blocks overlap");
      labels[y] = b;
    }
  }
  for (auto l : labels)
    if (l == blocks.size()) throw std::invalid_argument("blocks do not cover all points");
  return from_labels(labels);
}

Partition Partition::from_labels(std::span<const std::size_t> labels) {
  Partition p;
  const std::size_t n = labels.size();
  p.block_of_.assign(n, 0);
  std::vector<std::size_t> distinct(labels.begin(), labels.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::size_t> id(distinct.size(), n);
  std::size_t next = 0;
  for (Point y = 0; y < n; ++y) {
    auto k = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), labels[y]) -
                                      distinct.begin());
    if (id[k] == n) {
      id[k] = next++;
      p.blocks_.emplace_back();
    }
    p.block_of_[y] = id[k];
    p.blocks_[id[k]].push_back(y);
  }
  return p;
}

std::optional<std::size_t> Partition::uniform_block_size() const {
  if (blocks_.empty()) return std::nullopt;
  const std::size_t s = blocks_.front().size();
  for (const auto& b : blocks_)
    if (b.size() != s) return std::nullopt;
  return s;
}

Partition Partition::image(const Permutation& g) const {
  if (g.degree() != degree()) throw std::invalid_argument("degree mismatch");
  std::vector<std::size_t> labels(degree());
  for (Point y = 0; y < degree(); ++y) labels[g[y]] = block_of_[y];
  return from_labels(labels);
}

std::string Partition::to_text() const {
  std::ostringstream os;
  for (const auto& b : blocks_) {
    for (std::size_t i = 0; i < b.size(); ++i) os << (i ? " " : "") << b[i];
    os << '\n';
  }
  return os.str();
}

Partition Partition::parse_text(std::size_t degree, std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  std::vector<std::vector<Point>> blocks;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::vector<Point> b;
    long long v;
    while (ls >> v) {
      if (v < 0) throw std::invalid_argument("negative point");
      b.push_back(static_cast<Point>(v));
    }
    blocks.push_back(std::move(b));
  }
  return from_blocks(degree, std::move(blocks));
}

nlohmann::json Partition::to_json() const {
  return nlohmann::json{{"degree", degree()}, {"blocks", blocks_}};
}

Partition Partition::from_json(const nlohmann::json& j) {
  return from_blocks(j.at("degree").get<std::size_t>(),
                     j.at("blocks").get<std::vector<std::vector<Point>>>());
}

}  // namespace dci
