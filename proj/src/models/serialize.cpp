/*
 * Copyright (c) 2026, The soilml Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fstream>
#include <sstream>

#include "soilml/error.hpp"
#include "soilml/models/regressor.hpp"
#include "soilml/text.hpp"

namespace soilml {

namespace {

constexpr std::string_view kMagic = "soilml-model 1";

void put_vec(std::ostream& out, std::string_view key, std::span<const double> v) {
  out << key << ' ' << v.size();
  for (double x : v) out << ' ' << text::hexfloat(x);
  out << '\n';
}

void put_trees(std::ostream& out, const std::vector<RegressionTree>& trees) {
  out << "trees " << trees.size() << '\n';
  for (const auto& t : trees) {
    out << "tree " << t.nodes().size() << '\n';
    for (const auto& n : t.nodes()) {
      out << "node " << n.feature << ' ' << text::hexfloat(n.threshold) << ' ' << n.left << ' '
          << n.right << ' ' << text::hexfloat(n.value) << ' ' << n.n_samples << ' ' << n.depth
          << '\n';
    }
  }
}

/// Line-oriented reader; every line is "key tok tok ...".
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::vector<std::string> expect(std::string_view key) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto t = text::trim(line);
      if (t.empty()) continue;
      std::istringstream ss{std::string(t)};
      std::vector<std::string> toks;
      for (std::string tok; ss >> tok;) toks.push_back(tok);
      if (toks.front() != key) bad("expected '" + std::string(key) + "', got '" + toks.front() + "'");
      toks.erase(toks.begin());
      return toks;
    }
    bad("unexpected end of file, expected '" + std::string(key) + "'");
  }

  std::string one(std::string_view key) {
    auto t = expect(key);
    if (t.size() != 1) bad("'" + std::string(key) + "' takes one value");
    return t[0];
  }

  std::uint64_t u64(std::string_view key) { return to_u64(one(key)); }
  double dbl(std::string_view key) { return to_dbl(one(key)); }

  std::vector<double> vec(std::string_view key) {
    auto t = expect(key);
    if (t.empty()) bad("missing count");
    const auto n = to_u64(t[0]);
    if (t.size() != n + 1) bad("count mismatch for '" + std::string(key) + "'");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = to_dbl(t[i + 1]);
    return out;
  }

  std::vector<RegressionTree> trees() {
    const auto count = u64("trees");
    std::vector<RegressionTree> out;
    out.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
      const auto n_nodes = u64("tree");
      std::vector<TreeNode> nodes(n_nodes);
      for (auto& node : nodes) {
        auto t = expect("node");
        if (t.size() != 7) bad("node needs 7 fields");
        node.feature = static_cast<std::int32_t>(to_i64(t[0]));
        node.threshold = to_dbl(t[1]);
        node.left = static_cast<std::int32_t>(to_i64(t[2]));
        node.right = static_cast<std::int32_t>(to_i64(t[3]));
        node.value = to_dbl(t[4]);
        node.n_samples = static_cast<std::uint32_t>(to_u64(t[5]));
        node.depth = static_cast<std::uint32_t>(to_u64(t[6]));
      }
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& node = nodes[i];
        if (node.is_leaf()) continue;
        const auto lim = static_cast<std::int32_t>(nodes.size());
        if (node.left <= static_cast<std::int32_t>(i) || node.left >= lim ||
            node.right <= static_cast<std::int32_t>(i) || node.right >= lim) {
          bad("tree child index out of range");
        }
      }
      if (nodes.empty()) bad("empty tree");
      out.emplace_back(std::move(nodes));
    }
    return out;
  }

  [[noreturn]] void bad(const std::string& msg) const {
    fail(ErrorCode::BadModelFile, msg, static_cast<long long>(line_no_));
  }

 private:
  std::uint64_t to_u64(const std::string& s) const {
    const auto v = text::to_u64(s);
    if (!v) bad("bad integer '" + s + "'");
    return *v;
  }
  std::int64_t to_i64(const std::string& s) const {
    const auto v = text::to_i64(s);
    if (!v) bad("bad integer '" + s + "'");
    return *v;
  }
  double to_dbl(const std::string& s) const {
    const auto v = text::to_double(s);
    if (!v) bad("bad number '" + s + "'");
    return *v;
  }

  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

void save_model(std::ostream& out, const FittedModel& m) {
  const auto& spec = m.spec();
  out << kMagic << '\n';
  out << "family " << family_name(spec.family()) << '\n';
  out << "seed " << spec.seed << '\n';
  out << "allow_partial " << (spec.allow_partial ? 1 : 0) << '\n';
  out << "features " << m.features().to_string() << '\n';
  const auto kv = config_to_kv(spec.config);
  out << "config " << kv.size() << '\n';
  for (const auto& [k, v] : kv) out << "set " << k << ' ' << v << '\n';
  put_vec(out, "std.mean", m.standardizer().mean);
  put_vec(out, "std.scale", m.standardizer().std);
  out << "target " << text::hexfloat(m.target_scale().mean) << ' '
      << text::hexfloat(m.target_scale().std) << '\n';

  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SvrModel>) {
          out << "gamma " << text::hexfloat(p.gamma) << '\n';
          out << "bias " << text::hexfloat(p.bias) << '\n';
          out << "sv " << p.support_vectors.rows() << ' ' << p.support_vectors.cols() << '\n';
          for (std::size_t r = 0; r < p.support_vectors.rows(); ++r) {
            put_vec(out, "row", p.support_vectors.row(r));
          }
          put_vec(out, "coef", p.coef);
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          put_trees(out, p.trees);
        } else if constexpr (std::is_same_v<T, GbrModel>) {
          out << "base " << text::hexfloat(p.base) << '\n';
          out << "rate " << text::hexfloat(p.learning_rate) << '\n';
          put_trees(out, p.trees);
        } else {
          out << "inputs " << p.layout.n_inputs << '\n';
          put_vec(out, "params", p.params);
          put_vec(out, "running_mean", p.running_mean);
          put_vec(out, "running_var", p.running_var);
        }
      },
      m.params());
  out << "end\n";
  if (!out) fail(ErrorCode::Io, "failed writing model");
}

FittedModel load_model(std::istream& in) {
  std::string first;
  std::getline(in, first);
  if (text::trim(first) != kMagic) {
    fail(ErrorCode::BadModelFile, "not a soilml model file (bad header)", 1);
  }
  Reader r(in);
  const auto fam_name = r.one("family");
  const auto fam = family_from_name(fam_name);
  if (!fam) r.bad("unknown family '" + fam_name + "'");

  RegressorSpec spec;
  spec.config = default_config(*fam);
  spec.seed = r.u64("seed");
  spec.allow_partial = r.u64("allow_partial") != 0;
  FeatureSet features = [&] {
    const auto f = r.one("features");
    try {
      return FeatureSet::parse(f);
    } catch (const Error& e) {
      r.bad(e.what());
    }
  }();
  const auto n_cfg = r.u64("config");
  for (std::uint64_t i = 0; i < n_cfg; ++i) {
    auto t = r.expect("set");
    if (t.size() != 2) r.bad("config line needs key and value");
    try {
      config_set(spec.config, t[0], t[1]);
    } catch (const Error& e) {
      r.bad(e.what());
    }
  }
  Standardizer st;
  st.mean = r.vec("std.mean");
  st.std = r.vec("std.scale");
  if (st.mean.size() != features.size() || st.std.size() != features.size()) {
    r.bad("standardizer width differs from feature count");
  }
  TargetScale target;
  {
    auto t = r.expect("target");
    if (t.size() != 2) r.bad("target needs mean and scale");
    const auto a = text::to_double(t[0]);
    const auto b = text::to_double(t[1]);
    if (!a || !b) r.bad("bad target scale");
    target = {*a, *b};
  }

  ModelParams params;
  switch (*fam) {
    case Family::Svr: {
      SvrModel m;
      m.gamma = r.dbl("gamma");
      m.bias = r.dbl("bias");
      auto dims = r.expect("sv");
      if (dims.size() != 2) r.bad("sv needs rows and cols");
      const auto rows = text::to_u64(dims[0]);
      const auto cols = text::to_u64(dims[1]);
      if (!rows || !cols || *cols != features.size()) r.bad("bad support vector shape");
      std::vector<double> data;
      data.reserve(*rows * *cols);
      for (std::uint64_t i = 0; i < *rows; ++i) {
        auto row = r.vec("row");
        if (row.size() != *cols) r.bad("support vector width mismatch");
        data.insert(data.end(), row.begin(), row.end());
      }
      m.support_vectors = Matrix(*rows, *cols, std::move(data));
      m.coef = r.vec("coef");
      if (m.coef.size() != *rows) r.bad("coef count differs from support vectors");
      params = std::move(m);
      break;
    }
    case Family::RandomForest: {
      ForestModel m;
      m.trees = r.trees();
      params = std::move(m);
      break;
    }
    case Family::GradientBoosting: {
      GbrModel m;
      m.base = r.dbl("base");
      m.learning_rate = r.dbl("rate");
      m.trees = r.trees();
      params = std::move(m);
      break;
    }
    case Family::Mlp: {
      const auto& cfg = std::get<MlpConfig>(spec.config);
      const auto inputs = r.u64("inputs");
      if (inputs != features.size()) r.bad("network input width differs from feature count");
      MlpModel m;
      m.config = cfg;
      m.layout = MlpLayout(inputs, cfg.hidden_layers, cfg.hidden_width);
      m.params = r.vec("params");
      m.running_mean = r.vec("running_mean");
      m.running_var = r.vec("running_var");
      const auto stats = cfg.hidden_layers * cfg.hidden_width;
      if (m.params.size() != m.layout.n_params || m.running_mean.size() != stats ||
          m.running_var.size() != stats) {
        r.bad("network parameter count mismatch");
      }
      params = std::move(m);
      break;
    }
  }
  r.expect("end");
  return FittedModel(std::move(spec), features, std::move(st), target, std::move(params));
}

void save_model_file(const std::string& path, const FittedModel& m) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  save_model(out, m);
}

FittedModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  return load_model(in);
}

}  // namespace soilml
