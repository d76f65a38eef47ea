#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "spectree/dataset.hpp"
#include "spectree/tree.hpp"

namespace spectree {

/// CSV: first row is a header naming the attributes; every following row has
/// exactly one finite real per attribute ('.' decimal separator, ','
/// delimiter). Parse failures throw ParseError with file, 1-based row and
/// column; NaN and infinities are rejected here so evaluators never see them.
Dataset load_dataset_csv(const std::filesystem::path& path);
Dataset load_dataset_csv(std::istream& in, const std::string& name);

/// Writes a header (a0, a1, ...) and one row per record. Values use
/// shortest-round-trip formatting, so load(save(d)) == d exactly.
void save_dataset_csv(const Dataset& dataset,
                      const std::filesystem::path& path);

/// Tree JSON, schema version 1:
///   { "version": 1, "nodes": [ { "attr": u32, "thr": number | "-inf",
///                                "child": u32, "class": u32 | null }, ... ] }
/// Index 0 is the root; leaves carry "class" and the string threshold,
/// internal nodes carry a finite "thr" and "class": null. The loader maps
/// "-inf"/"inf" leaf thresholds to the in-memory +inf convention. Wrong
/// version or shape throws SchemaError naming the offending file; child
/// indices that would fall outside the node array are rejected here so later
/// traversal cannot leave the array.
EncodedTree load_tree_json(const std::filesystem::path& path);
EncodedTree load_tree_json(std::istream& in, const std::string& name);
void save_tree_json(const EncodedTree& tree,
                    const std::filesystem::path& path);
std::string tree_to_json(const EncodedTree& tree);

/// Assignment files: one class id per line, trailing newline, empty dataset
/// gives an empty file. Byte-identical for identical assignments.
void save_assignments(const ClassAssignment& assignment,
                      const std::filesystem::path& path);
ClassAssignment load_assignments(const std::filesystem::path& path);

}  // namespace spectree
