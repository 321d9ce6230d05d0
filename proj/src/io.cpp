#include "qdiscord/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qdiscord {

namespace {

[[noreturn]] void schema_error(const std::string& what) {
  throw InvalidArgument("state JSON: " + what);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

const char* strength_name(ChannelKind k) {
  switch (k) {
    case ChannelKind::local_dephasing: return "q";
    case ChannelKind::amplitude_damping: return "gamma";
    default: return "p";
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  std::string out(buf, res.ptr);
  if (std::isfinite(x) && out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

json state_to_json(const DensityMatrixd& rho) {
  json rows = json::array();
  for (Index i = 0; i < rho.dim(); ++i) {
    json row = json::array();
    for (Index j = 0; j < rho.dim(); ++j)
      row.push_back(json::array({rho.matrix()(i, j).real(), rho.matrix()(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return json{{"dim_a", rho.dim_a()}, {"dim_b", rho.dim_b()}, {"matrix", std::move(rows)}};
}

DensityMatrixd state_from_json(const json& j) {
  if (!j.is_object()) schema_error("expected an object");
  for (const char* key : {"dim_a", "dim_b", "matrix"})
    if (!j.contains(key)) schema_error(std::string("missing field '") + key + "'");
  if (!j["dim_a"].is_number_integer() || !j["dim_b"].is_number_integer())
    schema_error("dim_a and dim_b must be integers");
  const Dims dims{j["dim_a"].get<Index>(), j["dim_b"].get<Index>()};
  if (dims.a < 1 || dims.b < 1) throw InvalidDimension("state JSON: dimensions must be positive");
  const json& rows = j["matrix"];
  const Index d = dims.total();
  if (!rows.is_array() || static_cast<Index>(rows.size()) != d)
    schema_error("matrix must have dim_a * dim_b rows");
  CMatrix m(d, d);
  for (Index r = 0; r < d; ++r) {
    const json& row = rows[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != d)
      schema_error("matrix rows must have dim_a * dim_b entries");
    for (Index c = 0; c < d; ++c) {
      const json& e = row[static_cast<size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        schema_error("entries must be [re, im] pairs");
      m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return DensityMatrixd(dims, std::move(m));
}

void write_state_file(const std::string& path, const DensityMatrixd& rho) {
  auto out = open_out(path);
  out << state_to_json(rho).dump() << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

DensityMatrixd read_state_file(const std::string& path) {
  auto in = open_in(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
  }
  return state_from_json(j);
}

void write_ensemble(std::ostream& out, const EnsembleHeader& header,
                    const std::vector<DensityMatrixd>& states) {
  json h{{"ensemble", header.ensemble},
         {"dims", json::array({header.dims.a, header.dims.b})},
         {"seed", header.seed},
         {"count", states.size()},
         {"params", header.params}};
  out << json{{"header", std::move(h)}}.dump() << '\n';
  for (const auto& s : states) out << state_to_json(s).dump() << '\n';
}

void write_ensemble_file(const std::string& path, const EnsembleHeader& header,
                         const std::vector<DensityMatrixd>& states) {
  auto out = open_out(path);
  write_ensemble(out, header, states);
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<DensityMatrixd> read_ensemble_file(const std::string& path, EnsembleHeader* header) {
  auto in = open_in(path);
  std::string line;
  std::vector<DensityMatrixd> states;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw InvalidArgument("'" + path + "': malformed JSON line: " + e.what());
    }
    if (first && j.contains("header")) {
      first = false;
      if (header) {
        const json& h = j["header"];
        header->ensemble = h.value("ensemble", "");
        if (h.contains("dims")) header->dims = {h["dims"][0].get<Index>(), h["dims"][1].get<Index>()};
        header->seed = h.value("seed", std::uint64_t{0});
        header->count = h.value("count", std::size_t{0});
        header->params = h.value("params", json::object());
      }
      continue;
    }
    first = false;
    states.push_back(state_from_json(j));
  }
  return states;
}

std::vector<DensityMatrixd> read_states(const std::string& path) {
  auto in = open_in(path);
  json j;
  try {
    in >> j;
    // A single document with trailing content is an ensemble.
    in >> std::ws;
    if (!in.eof() || j.contains("header")) return read_ensemble_file(path);
  } catch (const json::exception&) {
    return read_ensemble_file(path);
  }
  return {state_from_json(j)};
}

json measurement_to_json(const ProjectiveMeasurement& m) {
  json cols = json::array();
  for (Index j = 0; j < m.dim(); ++j) {
    json v = json::array();
    for (Index i = 0; i < m.dim(); ++i)
      v.push_back(json::array({m.basis()(i, j).real(), m.basis()(i, j).imag()}));
    cols.push_back(std::move(v));
  }
  return json{{"dim", m.dim()}, {"basis_vectors", std::move(cols)}};
}

json discord_result_to_json(const DiscordResult& r) {
  return json{{"mutual_information", r.mutual_information},
              {"classical_correlations", r.classical_correlations},
              {"discord", r.discord},
              {"optimal_measurement", measurement_to_json(r.optimal_measurement)},
              {"optimizer_restarts_used", r.optimizer_restarts_used},
              {"converged", r.converged}};
}

json bloch_to_json(const BlochRepresentation<double>& b) {
  const RVector flat = b.flatten();
  return json{{"dim_a", b.dims.a},
              {"dim_b", b.dims.b},
              {"layout", "tau_a, tau_b, beta (column-major)"},
              {"coefficients", std::vector<double>(flat.data(), flat.data() + flat.size())}};
}

json channel_descriptor_to_json(const ChannelDescriptor& d) {
  json params{{strength_name(d.kind), d.strength}};
  if (d.target) params["target"] = state_to_json(*d.target);
  return json{{"kind", to_string(d.kind)},
              {"params", std::move(params)},
              {"dims", json::array({d.dims.a, d.dims.b})}};
}

ChannelDescriptor channel_descriptor_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("dims"))
    throw InvalidArgument("channel descriptor needs 'kind' and 'dims'");
  ChannelDescriptor d;
  d.kind = channel_kind_from_string(j["kind"].get<std::string>());
  const json& dims = j["dims"];
  if (!dims.is_array() || dims.size() != 2)
    throw InvalidArgument("channel descriptor 'dims' must be [d_A, d_B]");
  d.dims = {dims[0].get<Index>(), dims[1].get<Index>()};
  const json params = j.value("params", json::object());
  const char* name = strength_name(d.kind);
  if (!params.contains(name))
    throw InvalidArgument(std::string("channel descriptor missing parameter '") + name + "'");
  d.strength = params[name].get<double>();
  if (params.contains("target")) d.target = state_from_json(params["target"]);
  return d;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
  out << "step,commutator_norm,discord,in_c0\n";
  for (size_t i = 0; i < t.times.size(); ++i) {
    out << t.times[i] << ',' << format_double(t.commutator_norms[i]) << ',';
    if (t.discord_values) out << format_double((*t.discord_values)[i]);
    out << ',' << (t.commutator_norms[i] < t.threshold ? 1 : 0) << '\n';
  }
}

void write_trajectory_csv_file(const std::string& path, const Trajectory& t) {
  auto out = open_out(path);
  write_trajectory_csv(out, t);
  if (!out) throw IoError("write to '" + path + "' failed");
}

Dims parse_dims(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw InvalidArgument("dims must look like 2x3, got '" + text + "'");
  Dims d;
  try {
    size_t used = 0;
    d.a = std::stol(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument("trailing");
    const std::string rest = text.substr(x + 1);
    d.b = std::stol(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw InvalidArgument("dims must look like 2x3, got '" + text + "'");
  }
  if (d.a < 2 || d.b < 2) throw InvalidDimension("each dimension must be >= 2");
  return d;
}

std::string format_dims(Dims d) { return std::to_string(d.a) + "x" + std::to_string(d.b); }

void ensure_writable(const std::string& path) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
}

}  // namespace qdiscord
