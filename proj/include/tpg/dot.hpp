#pragma once

#include <memory>
#include <string>

#include "tpg/graph.hpp"

namespace tpg {

/// Canonical Graphviz text for a graph.
///
/// A `//` comment block names the format version, instruction set, register
/// count, action count and state-source layout. Team nodes `T<id>` come first
/// in id order, then the referenced action nodes `A<id>`, then one edge
/// statement per edge in creation order. Edge labels hold the program, one
/// `i<instruction>d<destination>$<source>:<location>,...;` group per line.
std::string export_dot(const TpgGraph& graph);

/// Parses export_dot output. Team ids are kept; edges get dense ids in file
/// order. The instruction set is looked up by name in the registry, or taken
/// from `instructions` when given (its name must match). Grammar errors, bad
/// programs and invariant violations throw with the offending line number.
TpgGraph import_dot(const std::string& text, std::shared_ptr<const InstructionSet> instructions = nullptr);

TpgGraph load_dot_file(const std::string& path, std::shared_ptr<const InstructionSet> instructions = nullptr);
void save_text_file(const std::string& path, const std::string& text);

}  // namespace tpg
