#include "acgd/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "acgd/errors.hpp"
#include "json.hpp"

namespace acgd {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const char* where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) {
      throw InvalidArgument(std::string("unknown field '") + key + "' in " + where);
    }
  }
}

template <class T>
T field(const json& obj, const char* key, const char* where) {
  if (!obj.contains(key)) {
    throw InvalidArgument(std::string("missing field '") + key + "' in " + where);
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("field '") + key + "' in " + where + ": " + e.what());
  }
}

json domain_to_json(const Domain& d) {
  if (const auto* box = std::get_if<Box>(&d.kind())) {
    return {{"kind", "box"}, {"lower", box->lower}, {"upper", box->upper}};
  }
  if (const auto* ball = std::get_if<Ball>(&d.kind())) {
    return {{"kind", "ball"}, {"center", ball->center}, {"radius", ball->radius}};
  }
  return {{"kind", "free"}, {"dim", d.dim()}};
}

Domain domain_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("domain must be an object");
  const auto kind = field<std::string>(j, "kind", "domain");
  if (kind == "box") {
    reject_unknown(j, {"kind", "lower", "upper"}, "box domain");
    return Domain::box(field<Vector>(j, "lower", "box domain"), field<Vector>(j, "upper", "box domain"));
  }
  if (kind == "ball") {
    reject_unknown(j, {"kind", "center", "radius"}, "ball domain");
    return Domain::ball(field<Vector>(j, "center", "ball domain"),
                        field<double>(j, "radius", "ball domain"));
  }
  if (kind == "free") {
    reject_unknown(j, {"kind", "dim"}, "free domain");
    return Domain::free(field<std::size_t>(j, "dim", "free domain"));
  }
  throw InvalidArgument("unknown domain kind '" + kind + "'");
}

struct ParamsToJson {
  json operator()(const NonstrongHardParams& p) const {
    return {{"k", p.k}, {"beta", p.beta}, {"gamma", p.gamma}, {"l", p.l}};
  }
  json operator()(const StrongHardParams& p) const {
    return {{"n", p.n}, {"Lbar_g", p.Lbar_g}, {"l", p.l}, {"alpha", p.alpha}};
  }
  json operator()(const RandomQpParams& p) const {
    return {{"n", p.n}, {"m", p.m}, {"seed", p.seed}};
  }
};

}  // namespace

std::string instance_type_name(const InstanceParams& p) {
  switch (p.index()) {
    case 0: return "nonstrong_hard";
    case 1: return "strong_hard";
    default: return "random_qp";
  }
}

std::string instance_to_json(const InstanceSpec& spec) {
  json j;
  j["type"] = instance_type_name(spec.params);
  j["params"] = std::visit(ParamsToJson{}, spec.params);
  if (spec.domain) j["domain"] = domain_to_json(*spec.domain);
  return j.dump(2) + "\n";
}

InstanceSpec instance_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("instance file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("instance file must hold a JSON object");
  reject_unknown(j, {"type", "params", "domain"}, "instance");
  const auto type = field<std::string>(j, "type", "instance");
  const json params = j.contains("params") ? j.at("params") : json::object();
  if (!params.is_object()) throw InvalidArgument("params must be an object");

  InstanceSpec spec;
  if (type == "nonstrong_hard") {
    reject_unknown(params, {"k", "beta", "gamma", "l"}, "nonstrong_hard params");
    NonstrongHardParams p;
    p.k = field<int>(params, "k", "nonstrong_hard params");
    p.beta = field<double>(params, "beta", "nonstrong_hard params");
    p.gamma = field<double>(params, "gamma", "nonstrong_hard params");
    p.l = field<double>(params, "l", "nonstrong_hard params");
    spec.params = p;
  } else if (type == "strong_hard") {
    reject_unknown(params, {"n", "Lbar_g", "l", "alpha"}, "strong_hard params");
    StrongHardParams p;
    p.n = field<std::size_t>(params, "n", "strong_hard params");
    p.Lbar_g = field<double>(params, "Lbar_g", "strong_hard params");
    p.l = field<double>(params, "l", "strong_hard params");
    p.alpha = field<double>(params, "alpha", "strong_hard params");
    spec.params = p;
  } else if (type == "random_qp") {
    reject_unknown(params, {"n", "m", "seed"}, "random_qp params");
    RandomQpParams p;
    p.n = field<std::size_t>(params, "n", "random_qp params");
    p.m = field<std::size_t>(params, "m", "random_qp params");
    p.seed = field<std::uint64_t>(params, "seed", "random_qp params");
    spec.params = p;
  } else {
    throw InvalidArgument("unknown instance type '" + type + "'");
  }
  if (j.contains("domain")) spec.domain = domain_from_json(j.at("domain"));
  return spec;
}

ProblemInstance build_instance(const InstanceSpec& spec) {
  ProblemInstance inst = std::visit(
      [](const auto& p) -> ProblemInstance {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, NonstrongHardParams>) return gen_nonstrong_hard(p);
        else if constexpr (std::is_same_v<P, StrongHardParams>) return gen_strong_hard(p);
        else return gen_random_qp(p);
      },
      spec.params);
  if (spec.domain) {
    if (spec.domain->dim() != inst.dim()) {
      throw DimensionMismatch("domain dimension does not match the instance");
    }
    inst.set_domain(*spec.domain);
  }
  return inst;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trace_to_csv(const std::vector<PhaseRecord>& records) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.t);
    out += ',' + std::to_string(r.oracle_calls);
    out += ',' + std::to_string(r.matvecs);
    out += ',' + format_real(r.obj_gap);
    out += ',' + format_real(r.feas_norm);
    out += ',' + format_real(r.dist_sq);
    out += ',' + std::to_string(r.S_t);
    out += '\n';
  }
  return out;
}

std::string summary_to_json(const RunSummary& s) {
  json j;
  j["doublings"] = s.doublings;
  j["final_guess"] = s.final_guess;
  j["oracle_calls"] = s.oracle_calls;
  j["matvecs"] = s.matvecs;
  j["feas_norm"] = s.feas_norm;
  j["gap"] = s.gap;
  j["success"] = s.success;
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + tmp.string() + " for writing");
    os << content;
    os.flush();
    if (!os) throw Error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move " + tmp.string() + " into place: " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace acgd
