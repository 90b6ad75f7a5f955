/*
 * Copyright 2026 The cartelc Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdio>
#include <functional>

#include <json.hpp>

#include "cartelc/errors.hpp"
#include "cartelc/induction.hpp"

namespace cartelc {
namespace {

using nlohmann::json;

void append_real(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void write_node(const Tree& tree, int index, std::string& out) {
  const TreeNode& n = tree.nodes[index];
  if (n.is_leaf()) {
    out += "{\"type\":\"leaf\",\"class\":";
    out += std::to_string(n.class_id);
    out += '}';
    return;
  }
  out += "{\"type\":\"split\",\"coefficients\":[";
  for (Eigen::Index f = 0; f < n.plane.coefficients.size(); ++f) {
    if (f) out += ',';
    append_real(out, n.plane.coefficients[f]);
  }
  out += "],\"bias\":";
  append_real(out, n.plane.bias);
  out += ",\"left\":";
  write_node(tree, n.left, out);
  out += ",\"right\":";
  write_node(tree, n.right, out);
  out += '}';
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw FormatError("tree JSON " + path + ": " + what);
}

const json& member(const json& object, const std::string& path, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) fail(path, std::string("missing key '") + key + "'");
  return *it;
}

class NodeReader {
 public:
  NodeReader(Tree& tree) : tree_(tree) {}

  int read(const json& node, const std::string& path) {
    if (!node.is_object()) fail(path, "expected an object");
    const json& type = member(node, path, "type");
    if (!type.is_string()) fail(path + ".type", "expected a string");
    const int index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();

    if (type == "leaf") {
      const json& cls = member(node, path, "class");
      if (!cls.is_number_integer()) fail(path + ".class", "expected an integer");
      const auto id = cls.get<std::int64_t>();
      if (id < 0 || id >= static_cast<std::int64_t>(tree_.classes.size())) {
        fail(path + ".class", "class id out of range");
      }
      tree_.nodes[index].class_id = static_cast<int>(id);
      return index;
    }
    if (type != "split") fail(path + ".type", "expected \"leaf\" or \"split\"");

    const json& coefficients = member(node, path, "coefficients");
    if (!coefficients.is_array() || coefficients.size() != static_cast<std::size_t>(tree_.m)) {
      fail(path + ".coefficients", "expected an array of " + std::to_string(tree_.m) + " numbers");
    }
    Hyperplane plane;
    plane.coefficients.resize(tree_.m);
    for (int f = 0; f < tree_.m; ++f) {
      if (!coefficients[f].is_number()) {
        fail(path + ".coefficients[" + std::to_string(f) + "]", "expected a number");
      }
      plane.coefficients[f] = coefficients[f].get<double>();
      if (plane.coefficients[f] != 0.0) plane.active_features.push_back(f);
    }
    const json& bias = member(node, path, "bias");
    if (!bias.is_number()) fail(path + ".bias", "expected a number");
    plane.bias = bias.get<double>();

    const int left = read(member(node, path, "left"), path + ".left");
    const int right = read(member(node, path, "right"), path + ".right");
    TreeNode& n = tree_.nodes[index];
    n.kind = TreeNode::Kind::Split;
    n.class_id = -1;
    n.plane = std::move(plane);
    n.left = left;
    n.right = right;
    return index;
  }

 private:
  Tree& tree_;
};

}  // namespace

std::string serialize(const Tree& tree) {
  std::string out = "{\"m\":" + std::to_string(tree.m) + ",\"classes\":[";
  for (std::size_t c = 0; c < tree.classes.size(); ++c) {
    if (c) out += ',';
    out += json(tree.classes[c]).dump();
  }
  out += "],\"root\":";
  write_node(tree, 0, out);
  out += "}";
  return out;
}

Tree deserialize(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("tree JSON is malformed: ") + e.what());
  }
  if (!doc.is_object()) fail("$", "expected an object");
  Tree tree;
  const json& m = member(doc, "$", "m");
  if (!m.is_number_integer() || m.get<std::int64_t>() < 1) fail("$.m", "expected a positive integer");
  tree.m = m.get<int>();
  const json& classes = member(doc, "$", "classes");
  if (!classes.is_array() || classes.empty()) fail("$.classes", "expected a non-empty array");
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (!classes[c].is_string()) fail("$.classes[" + std::to_string(c) + "]", "expected a string");
    tree.classes.push_back(classes[c].get<std::string>());
  }
  NodeReader(tree).read(member(doc, "$", "root"), "$.root");
  return tree;
}

}  // namespace cartelc
