#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dci/perm.hpp"

namespace dci {

// A partition of {0, ..., n-1}.  Always normalised: block ids are assigned in
// ascending order of each block's minimum point and every block is sorted,
// so structural equality is partition equality.
class Partition {
 public:
  Partition() = default;

  static Partition singletons(std::size_t degree);
  static Partition whole(std::size_t degree);
  // Throws std::invalid_argument unless the blocks are nonempty, disjoint
  // and cover 0..degree-1.
  static Partition from_blocks(std::size_t degree, std::vector<std::vector<Point>> blocks);
  // Points with equal labels share a block.
  static Partition from_labels(std::span<const std::size_t> labels);

  std::size_t degree() const { return block_of_.size(); }
  std::size_t block_count() const { return blocks_.size(); }
  std::size_t block_of(Point y) const { return block_of_[y]; }
  const std::vector<Point>& block(std::size_t id) const { return blocks_[id]; }
  const std::vector<Point>& block_containing(Point y) const { return blocks_[block_of_[y]]; }
  const std::vector<std::vector<Point>>& blocks() const { return blocks_; }
  const std::vector<std::size_t>& labels() const { return block_of_; }

  // Common block size, if all blocks have the same size.
  std::optional<std::size_t> uniform_block_size() const;
  bool is_trivial() const { return block_count() == degree(); }
  bool is_whole() const { return block_count() == 1; }

  bool same_block(Point a, Point b) const { return block_of_[a] == block_of_[b]; }

  // Image of the partition under a permutation.
  Partition image(const Permutation& g) const;

  // One block per line, points space-separated.
  std::string to_text() const;
  static Partition parse_text(std::size_t degree, std::string_view text);
  nlohmann::json to_json() const;
  static Partition from_json(const nlohmann::json& j);

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::size_t> block_of_;
  std::vector<std::vector<Point>> blocks_;
};

}  // namespace dci
