#pragma once

#include "qframe/nogo.hpp"
#include "qframe/quasiprob.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace qframe {

using nlohmann::json;

// Malformed or schema-violating JSON input. Parse errors keep nlohmann's
// byte-position diagnostics in the message.
struct JsonError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operators: { "dim": d, "re": [[..]], "im": [[..]] }, row-major, full d x d.
json operator_to_json(const CMat& m);
CMat operator_from_json(const json& j);

// POVMs: { "dim": d, "effects": [operator, ...] }.
json povm_to_json(const Povm& m);
Povm povm_from_json(const json& j);

json frame_to_json(const Frame& f);
Frame frame_from_json(const json& j);

// Representations: { "frame": <frame json or fingerprint string>,
// "values": [..], "via": "F"|"E" }. embed_frame controls which form the
// "frame" field takes.
json rep_to_json(const RepFunction& rep, Via via, const Frame& frame,
                 bool embed_frame = true);
json reps_to_json(const CondQuasiProb& reps, const Frame& frame,
                  bool embed_frame = true);

struct LoadedRep {
  RepFunction rep;
  Via via = Via::frame_F;
  std::optional<Frame> frame;  // present when the file embedded the frame
};
LoadedRep rep_from_json(const json& j);
std::vector<LoadedRep> reps_from_json(const json& j);

// Kernels: flattened row-major arrays with explicit shape.
json kernel2_to_json(const Kernel2& k);
Kernel2 kernel2_from_json(const json& j);
json kernel3_to_json(const Kernel3& k);
Kernel3 kernel3_from_json(const json& j);

// Complex-valued function on the label set (star products): separate real
// and imaginary arrays.
json complex_function_to_json(const CVec& v, std::uint64_t frame_fp);

json witness_report_to_json(const WitnessReport& r);

// CLI configuration file. Unknown keys and non-positive tolerances are
// rejected.
struct Config {
  std::optional<Convention> convention;
  std::map<std::string, double> tolerance_overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_path;
  std::optional<std::string> output_format;  // "json" | "csv"
};
Config config_from_json(const json& j);

json parse_json_text(const std::string& text);
json load_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

// (q, p, value) rows for plotting.
std::string rep_to_csv(const Frame& frame, const RepFunction& rep);

std::string fingerprint_hex(std::uint64_t fp);

}  // namespace qframe
