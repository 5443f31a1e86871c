#pragma once

#include "dci/digraph.hpp"
#include "dci/group.hpp"

namespace dci {

// The orbital colouring of G: color(u, v) is the index of the G-orbit of
// (u, v) on ordered pairs, numbered by the row-major order of each orbit's
// first pair.
ColoredDigraph orbitals(const GeneratedGroup& g);

// Largest subgroup of Sym(n) with the same orbitals as G.
GeneratedGroup two_closure(const GeneratedGroup& g);

// True iff f maps every orbital of G onto itself, i.e. f lies in the
// 2-closure of G.
bool preserves_orbitals(const GeneratedGroup& g, const Permutation& f);
bool preserves_orbitals(const ColoredDigraph& orbital_colors, const Permutation& f);

}  // namespace dci
