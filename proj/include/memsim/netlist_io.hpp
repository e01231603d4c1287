#pragma once

#include <string>

#include "memsim/netlist.hpp"

namespace memsim {

/// Plain-text listing: one node per line (id, kind, sorted params), one
/// train per line, one edge per line; everything in lexicographic order
/// so the dump is stable across runs and usable as a golden file.
std::string dump_netlist(const NeuronNetlist& netlist);

/// Inverse of dump_netlist. parse_netlist(dump_netlist(n)) describes the
/// same circuit (and re-dumps byte-identically).
NeuronNetlist parse_netlist(const std::string& text);

} // namespace memsim
