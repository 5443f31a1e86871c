#pragma once

#include <span>
#include <vector>

#include "dci/group.hpp"
#include "dci/partition.hpp"

namespace dci {

// True iff every generator maps every block onto a block.
bool is_invariant(const GeneratedGroup& g, const Partition& p);

// The orbits of H as a partition.
Partition orbit_partition(const GeneratedGroup& h);

// Finest G-invariant partition with `seed` inside one block.  Requires a
// transitive group and |seed| >= 2.
Partition minimal_block(const GeneratedGroup& g, std::span<const Point> seed);

// All nontrivial minimal block systems of a transitive group (those that
// are not refined by another nontrivial block system), ordered by the block
// containing point 0.
std::vector<Partition> minimal_block_systems(const GeneratedGroup& g);

// Blocks are the nonempty pairwise intersections.
Partition partition_meet(const Partition& c, const Partition& d);

// True iff every block of b lies inside a block of c (b ⪯ c).
bool refines(const Partition& b, const Partition& c);

// Invariant partition with blocks of cardinality lcm(a, b), built from a
// fixed block of c and the blocks of d meeting it.  `halves` is an invariant
// partition into two blocks; it is used when a or b is even.
Partition partition_join(const GeneratedGroup& g, const Partition& c, const Partition& d,
                         const Partition& halves);

// The group acting simultaneously on the points and on the blocks of p:
// point y keeps its index and block b becomes point degree + b.
GeneratedGroup with_block_action(const GeneratedGroup& g, const Partition& p);

struct InducedAction {
  GeneratedGroup quotient;  // action on the blocks, degree = block count
  GeneratedGroup kernel;    // elements fixing every block, on the original points
};

// Action on the blocks of an invariant partition and its kernel.
InducedAction induced_action(const GeneratedGroup& g, const Partition& p);

// True iff every element fixing one block fixes all blocks.
bool is_block_regular(const GeneratedGroup& g, const Partition& p);

// Induced permutation of the blocks.
Permutation block_permutation(const Permutation& f, const Partition& p);

}  // namespace dci
