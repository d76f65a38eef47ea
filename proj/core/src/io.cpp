#include "spectree/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "spectree/errors.hpp"

namespace spectree {

namespace {

using nlohmann::json;

std::string location(const std::string& name, std::size_t row,
                     std::size_t col) {
  return name + ":" + std::to_string(row) + ":" + std::to_string(col);
}

float parse_cell(const std::string& name, std::size_t row, std::size_t col,
                 std::string_view cell) {
  float value = 0.0f;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc{} || result.ptr != last || cell.empty()) {
    throw ParseError(location(name, row, col) + ": not a real number: '" +
                     std::string(cell) + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(location(name, row, col) + ": non-finite value: '" +
                     std::string(cell) + "'");
  }
  return value;
}

std::vector<std::string_view> split_fields(const std::string& line) {
  std::vector<std::string_view> fields;
  std::string_view view = line;
  while (true) {
    const auto comma = view.find(',');
    if (comma == std::string_view::npos) {
      fields.push_back(view);
      return fields;
    }
    fields.push_back(view.substr(0, comma));
    view.remove_prefix(comma + 1);
  }
}

std::string shortest(float value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string() + " for reading");
  }
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  return out;
}

}  // namespace

Dataset load_dataset_csv(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(name + ":1:1: missing header row");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  const std::size_t arity = split_fields(line).size();
  Dataset dataset(static_cast<std::uint32_t>(arity));
  std::vector<float> record(arity);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) {
      break;  // trailing newline
    }
    const auto fields = split_fields(line);
    if (fields.size() != arity) {
      throw ParseError(location(name, row, fields.size()) + ": expected " +
                       std::to_string(arity) + " fields, got " +
                       std::to_string(fields.size()));
    }
    for (std::size_t col = 0; col < arity; ++col) {
      record[col] = parse_cell(name, row, col + 1, fields[col]);
    }
    dataset.append(record);
  }
  return dataset;
}

Dataset load_dataset_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return load_dataset_csv(in, path.string());
}

void save_dataset_csv(const Dataset& dataset,
                      const std::filesystem::path& path) {
  auto out = open_output(path);
  for (std::uint32_t a = 0; a < dataset.arity(); ++a) {
    out << (a == 0 ? "a" : ",a") << a;
  }
  out << '\n';
  for (std::size_t i = 0; i < dataset.count(); ++i) {
    const auto record = dataset.record(i);
    for (std::uint32_t a = 0; a < dataset.arity(); ++a) {
      if (a != 0) {
        out << ',';
      }
      out << shortest(record[a]);
    }
    out << '\n';
  }
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

namespace {

std::uint32_t require_u32(const json& value, const std::string& name,
                          const std::string& what, std::size_t index) {
  if (!value.is_number_unsigned() ||
      value.get<std::uint64_t>() >
          std::numeric_limits<std::uint32_t>::max()) {
    throw SchemaError(name + ": node " + std::to_string(index) + ": " + what +
                      " must be an unsigned 32-bit integer");
  }
  return value.get<std::uint32_t>();
}

}  // namespace

EncodedTree load_tree_json(std::istream& in, const std::string& name) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(name + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) {
    throw SchemaError(name + ": top level must be an object");
  }
  if (!doc.contains("version") || !doc["version"].is_number_integer()) {
    throw SchemaError(name + ": missing integer 'version'");
  }
  if (doc["version"].get<std::int64_t>() != 1) {
    throw SchemaError(name + ": unsupported schema version " +
                      doc["version"].dump() + ", expected 1");
  }
  if (!doc.contains("nodes") || !doc["nodes"].is_array() ||
      doc["nodes"].empty()) {
    throw SchemaError(name + ": 'nodes' must be a non-empty array");
  }
  const auto& items = doc["nodes"];
  const std::size_t n = items.size();
  std::vector<EncodedNode> nodes;
  nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& item = items[i];
    if (!item.is_object() || !item.contains("attr") ||
        !item.contains("thr") || !item.contains("child") ||
        !item.contains("class")) {
      throw SchemaError(name + ": node " + std::to_string(i) +
                        " must be an object with attr, thr, child, class");
    }
    EncodedNode node;
    node.attribute = require_u32(item["attr"], name, "attr", i);
    node.child = require_u32(item["child"], name, "child", i);
    if (node.child >= n) {
      throw SchemaError(name + ": node " + std::to_string(i) +
                        ": child index " + std::to_string(node.child) +
                        " out of range");
    }
    const json& cls = item["class"];
    const json& thr = item["thr"];
    if (cls.is_null()) {
      node.class_id = kNoClass;
      if (!thr.is_number()) {
        throw SchemaError(name + ": node " + std::to_string(i) +
                          ": internal thr must be a number");
      }
      const double value = thr.get<double>();
      node.threshold = static_cast<float>(value);
      if (!std::isfinite(value) || !std::isfinite(node.threshold)) {
        throw SchemaError(name + ": node " + std::to_string(i) +
                          ": internal thr must be finite");
      }
      if (node.child + 1 >= n) {
        throw SchemaError(name + ": node " + std::to_string(i) +
                          ": right child index " +
                          std::to_string(node.child + 1) + " out of range");
      }
    } else {
      node.class_id = require_u32(cls, name, "class", i);
      if (node.class_id == kNoClass) {
        throw SchemaError(name + ": node " + std::to_string(i) +
                          ": class id " + std::to_string(kNoClass) +
                          " is reserved");
      }
      if (!thr.is_string() ||
          (thr.get<std::string>() != "-inf" &&
           thr.get<std::string>() != "inf" &&
           thr.get<std::string>() != "+inf")) {
        throw SchemaError(name + ": node " + std::to_string(i) +
                          ": leaf thr must be the string \"-inf\"");
      }
      node.threshold = std::numeric_limits<float>::infinity();
    }
    nodes.push_back(node);
  }
  return EncodedTree(std::move(nodes));
}

EncodedTree load_tree_json(const std::filesystem::path& path) {
  auto in = open_input(path);
  return load_tree_json(in, path.string());
}

std::string tree_to_json(const EncodedTree& tree) {
  json items = json::array();
  for (const EncodedNode& node : tree.nodes()) {
    json item;
    item["attr"] = node.attribute;
    item["child"] = node.child;
    if (node.is_leaf()) {
      item["class"] = node.class_id;
      item["thr"] = "-inf";
    } else {
      item["class"] = nullptr;
      // Serialize through double so the shortest representation reads back
      // to the identical float.
      item["thr"] = static_cast<double>(node.threshold);
    }
    items.push_back(std::move(item));
  }
  json doc;
  doc["version"] = 1;
  doc["nodes"] = std::move(items);
  return doc.dump(2) + "\n";
}

void save_tree_json(const EncodedTree& tree,
                    const std::filesystem::path& path) {
  auto out = open_output(path);
  out << tree_to_json(tree);
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

void save_assignments(const ClassAssignment& assignment,
                      const std::filesystem::path& path) {
  auto out = open_output(path);
  for (const std::uint32_t class_id : assignment) {
    out << class_id << '\n';
  }
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

ClassAssignment load_assignments(const std::filesystem::path& path) {
  auto in = open_input(path);
  ClassAssignment assignment;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) {
      break;
    }
    std::uint32_t value = 0;
    const auto* first = line.data();
    const auto* last = line.data() + line.size();
    const auto result = std::from_chars(first, last, value);
    if (result.ec != std::errc{} || result.ptr != last) {
      throw ParseError(location(path.string(), row, 1) +
                       ": not a class id: '" + line + "'");
    }
    assignment.push_back(value);
  }
  return assignment;
}

}  // namespace spectree
