#include "qframe/io.hpp"

#include <fstream>
#include <sstream>

namespace qframe {

namespace {

const json& require_key(const json& j, const char* key, const char* who) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw JsonError(std::string(who) + ": missing key \"" + key + "\"");
  }
  return *it;
}

int require_dim(const json& j, const char* who) {
  const json& d = require_key(j, "dim", who);
  if (!d.is_number_integer() || d.get<int>() < 2) {
    throw JsonError(std::string(who) + ": \"dim\" must be an integer >= 2");
  }
  return d.get<int>();
}

std::vector<std::vector<double>> real_grid(const CMat& m, bool imag) {
  std::vector<std::vector<double>> g(m.rows(), std::vector<double>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      g[i][j] = imag ? m(i, j).imag() : m(i, j).real();
  return g;
}

void fill_grid(CMat& m, const json& part, bool imag, const char* who) {
  if (!part.is_array() || static_cast<int>(part.size()) != m.rows()) {
    throw JsonError(std::string(who) + ": matrix part has wrong row count");
  }
  for (int i = 0; i < m.rows(); ++i) {
    const json& row = part[i];
    if (!row.is_array() || static_cast<int>(row.size()) != m.cols()) {
      throw JsonError(std::string(who) + ": matrix part has wrong column count");
    }
    for (int j = 0; j < m.cols(); ++j) {
      if (!row[j].is_number()) {
        throw JsonError(std::string(who) + ": matrix entries must be numbers");
      }
      const double v = row[j].get<double>();
      m(i, j) += imag ? Complex(0.0, v) : Complex(v, 0.0);
    }
  }
}

std::vector<double> doubles_from(const json& j, const char* who) {
  if (!j.is_array()) throw JsonError(std::string(who) + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw JsonError(std::string(who) + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string fingerprint_hex(std::uint64_t fp) {
  std::ostringstream os;
  os << std::hex << fp;
  return os.str();
}

json operator_to_json(const CMat& m) {
  return json{{"dim", m.rows()}, {"re", real_grid(m, false)}, {"im", real_grid(m, true)}};
}

CMat operator_from_json(const json& j) {
  if (!j.is_object()) throw JsonError("operator: expected an object");
  const int d = require_dim(j, "operator");
  CMat m = CMat::Zero(d, d);
  fill_grid(m, require_key(j, "re", "operator"), false, "operator");
  fill_grid(m, require_key(j, "im", "operator"), true, "operator");
  return m;
}

json povm_to_json(const Povm& m) {
  json effects = json::array();
  for (const auto& e : m.effects) effects.push_back(operator_to_json(e.m));
  return json{{"dim", m.dim()}, {"effects", std::move(effects)}};
}

Povm povm_from_json(const json& j) {
  if (!j.is_object()) throw JsonError("povm: expected an object");
  const int d = require_dim(j, "povm");
  const json& effects = require_key(j, "effects", "povm");
  if (!effects.is_array() || effects.empty()) {
    throw JsonError("povm: \"effects\" must be a nonempty array");
  }
  std::vector<HermitianOp> ops;
  ops.reserve(effects.size());
  for (const auto& e : effects) {
    CMat m = operator_from_json(e);
    if (m.rows() != d) throw JsonError("povm: effect dimension mismatch");
    ops.emplace_back(std::move(m));
  }
  return validate_povm(std::move(ops));
}

json frame_to_json(const Frame& f) {
  json labels = json::array();
  for (const auto& l : f.labels) labels.push_back(json::array({l[0], l[1]}));
  json elements = json::array();
  for (const auto& e : f.elements) elements.push_back(operator_to_json(e));
  return json{{"dim", f.dim},
              {"labels", std::move(labels)},
              {"weights", f.weights},
              {"elements", std::move(elements)},
              {"kind", to_string(f.kind)},
              {"convention", to_string(f.convention)}};
}

Frame frame_from_json(const json& j) {
  if (!j.is_object()) throw JsonError("frame: expected an object");
  Frame f;
  f.dim = require_dim(j, "frame");
  const json& labels = require_key(j, "labels", "frame");
  if (!labels.is_array()) throw JsonError("frame: \"labels\" must be an array");
  for (const auto& l : labels) {
    if (!l.is_array() || l.size() != 2 || !l[0].is_number_integer() ||
        !l[1].is_number_integer()) {
      throw JsonError("frame: labels must be integer pairs");
    }
    f.labels.push_back({l[0].get<int>(), l[1].get<int>()});
  }
  f.weights = doubles_from(require_key(j, "weights", "frame"), "frame weights");
  const json& elements = require_key(j, "elements", "frame");
  if (!elements.is_array()) throw JsonError("frame: \"elements\" must be an array");
  for (const auto& e : elements) {
    CMat m = operator_from_json(e);
    if (m.rows() != f.dim) throw JsonError("frame: element dimension mismatch");
    f.elements.push_back(std::move(m));
  }
  f.kind = frame_kind_from_string(
      require_key(j, "kind", "frame").get<std::string>());
  f.convention = convention_from_string(
      require_key(j, "convention", "frame").get<std::string>());
  check_frame_shape(f);
  return f;
}

json rep_to_json(const RepFunction& rep, Via via, const Frame& frame,
                 bool embed_frame) {
  json fr = embed_frame ? frame_to_json(frame)
                        : json(fingerprint_hex(frame.fingerprint()));
  return json{{"frame", std::move(fr)},
              {"values", rep.values},
              {"via", via == Via::frame_F ? "F" : "E"}};
}

json reps_to_json(const CondQuasiProb& reps, const Frame& frame,
                  bool embed_frame) {
  json out = json::array();
  for (std::size_t k = 0; k < reps.reps.size(); ++k) {
    // embed the frame once; later outcomes reference it by fingerprint
    out.push_back(rep_to_json(reps.reps[k], reps.via, frame,
                              embed_frame && k == 0));
  }
  return out;
}

LoadedRep rep_from_json(const json& j) {
  if (!j.is_object()) throw JsonError("rep: expected an object");
  LoadedRep out;
  const json& fr = require_key(j, "frame", "rep");
  if (fr.is_object()) {
    out.frame = frame_from_json(fr);
    out.rep.frame_fp = out.frame->fingerprint();
  } else if (fr.is_string()) {
    out.rep.frame_fp = std::stoull(fr.get<std::string>(), nullptr, 16);
  } else {
    throw JsonError("rep: \"frame\" must be a frame object or fingerprint string");
  }
  out.rep.values = doubles_from(require_key(j, "values", "rep"), "rep values");
  const std::string via = require_key(j, "via", "rep").get<std::string>();
  if (via == "F") {
    out.via = Via::frame_F;
  } else if (via == "E") {
    out.via = Via::dual_E;
  } else {
    throw JsonError("rep: \"via\" must be \"F\" or \"E\"");
  }
  return out;
}

std::vector<LoadedRep> reps_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw JsonError("reps: expected a nonempty array of rep objects");
  }
  std::vector<LoadedRep> out;
  for (const auto& r : j) out.push_back(rep_from_json(r));
  return out;
}

json kernel2_to_json(const Kernel2& k) {
  const int n = k.size();
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) flat.push_back(k.matrix(i, j));
  return json{{"frame", fingerprint_hex(k.frame_fp)},
              {"shape", json::array({n, n})},
              {"values", std::move(flat)}};
}

Kernel2 kernel2_from_json(const json& j) {
  const json& shape = require_key(j, "shape", "kernel2");
  if (!shape.is_array() || shape.size() != 2 || shape[0] != shape[1]) {
    throw JsonError("kernel2: shape must be [n, n]");
  }
  const int n = shape[0].get<int>();
  const auto flat = doubles_from(require_key(j, "values", "kernel2"), "kernel2");
  if (static_cast<int>(flat.size()) != n * n) {
    throw JsonError("kernel2: values length does not match shape");
  }
  Kernel2 k;
  k.frame_fp = std::stoull(
      require_key(j, "frame", "kernel2").get<std::string>(), nullptr, 16);
  k.matrix.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c) k.matrix(i, c) = flat[i * n + c];
  return k;
}

json kernel3_to_json(const Kernel3& k) {
  std::vector<double> re, im;
  re.reserve(k.values.size());
  im.reserve(k.values.size());
  for (const auto& v : k.values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  return json{{"frame", fingerprint_hex(k.frame_fp)},
              {"dual", fingerprint_hex(k.dual_fp)},
              {"shape", json::array({k.n, k.n, k.n})},
              {"re", std::move(re)},
              {"im", std::move(im)}};
}

Kernel3 kernel3_from_json(const json& j) {
  const json& shape = require_key(j, "shape", "kernel3");
  if (!shape.is_array() || shape.size() != 3) {
    throw JsonError("kernel3: shape must be [n, n, n]");
  }
  Kernel3 k;
  k.n = shape[0].get<int>();
  k.frame_fp = std::stoull(
      require_key(j, "frame", "kernel3").get<std::string>(), nullptr, 16);
  k.dual_fp = std::stoull(
      require_key(j, "dual", "kernel3").get<std::string>(), nullptr, 16);
  const auto re = doubles_from(require_key(j, "re", "kernel3"), "kernel3");
  const auto im = doubles_from(require_key(j, "im", "kernel3"), "kernel3");
  const std::size_t expect = static_cast<std::size_t>(k.n) * k.n * k.n;
  if (re.size() != expect || im.size() != expect) {
    throw JsonError("kernel3: array lengths do not match shape");
  }
  k.values.resize(expect);
  for (std::size_t i = 0; i < expect; ++i) k.values[i] = Complex(re[i], im[i]);
  return k;
}

json complex_function_to_json(const CVec& v, std::uint64_t frame_fp) {
  std::vector<double> re(v.size()), im(v.size());
  for (int i = 0; i < v.size(); ++i) {
    re[i] = v(i).real();
    im[i] = v(i).imag();
  }
  return json{{"frame", fingerprint_hex(frame_fp)},
              {"re", std::move(re)},
              {"im", std::move(im)}};
}

json witness_report_to_json(const WitnessReport& r) {
  return json{{"dim", r.dim},
              {"frame_seed", r.frame_seed},
              {"min_dual_eig", r.min_dual_eig},
              {"choi_pt_min_eig", r.choi_pt_min_eig},
              {"verdict", verdict_string(r)}};
}

Config config_from_json(const json& j) {
  if (!j.is_object()) throw JsonError("config: expected an object");
  Config c;
  for (const auto& [key, value] : j.items()) {
    if (key == "convention") {
      c.convention = convention_from_string(value.get<std::string>());
    } else if (key == "tolerances") {
      if (!value.is_object()) throw JsonError("config: \"tolerances\" must be an object");
      for (const auto& [name, v] : value.items()) {
        if (!v.is_number() || !(v.get<double>() > 0.0)) {
          throw JsonError("config: tolerance \"" + name + "\" must be positive");
        }
        c.tolerance_overrides[name] = v.get<double>();
      }
    } else if (key == "seed") {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
        throw JsonError("config: \"seed\" must be a non-negative integer");
      }
      c.seed = value.get<std::uint64_t>();
    } else if (key == "output") {
      if (!value.is_object()) throw JsonError("config: \"output\" must be an object");
      for (const auto& [name, v] : value.items()) {
        if (name == "path") {
          c.output_path = v.get<std::string>();
        } else if (name == "format") {
          const std::string fmt = v.get<std::string>();
          if (fmt != "json" && fmt != "csv") {
            throw JsonError("config: output format must be \"json\" or \"csv\"");
          }
          c.output_format = fmt;
        } else {
          throw JsonError("config: unknown output key \"" + name + "\"");
        }
      }
    } else {
      throw JsonError("config: unknown key \"" + key + "\"");
    }
  }
  return c;
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw JsonError(std::string("malformed JSON: ") + e.what());
  }
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw JsonError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw JsonError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw JsonError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string rep_to_csv(const Frame& frame, const RepFunction& rep) {
  if (rep.size() != frame.size()) {
    throw DimensionError("rep_to_csv: representation length does not match frame");
  }
  std::ostringstream os;
  os << "q,p,value\n";
  os.precision(17);
  for (int i = 0; i < frame.size(); ++i) {
    os << frame.labels[i][0] << ',' << frame.labels[i][1] << ','
       << rep.values[i] << '\n';
  }
  return os.str();
}

}  // namespace qframe
