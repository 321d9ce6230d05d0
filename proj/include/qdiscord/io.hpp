#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdiscord/bloch.hpp"
#include "qdiscord/channels.hpp"
#include "qdiscord/discord.hpp"
#include "qdiscord/states.hpp"

namespace qdiscord {

using json = nlohmann::json;

/// { "dim_a": int, "dim_b": int, "matrix": [[[re, im], ...], ...] }, rows in A-major order.
json state_to_json(const DensityMatrixd& rho);

/// Validates the schema (InvalidArgument) and the state invariants (NotAState).
DensityMatrixd state_from_json(const json& j);

void write_state_file(const std::string& path, const DensityMatrixd& rho);
DensityMatrixd read_state_file(const std::string& path);

/// First line of an ensemble JSON-lines file.
struct EnsembleHeader {
  std::string ensemble;  // pure | mixed | zero-discord | injected
  Dims dims;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  json params = json::object();
};

void write_ensemble(std::ostream& out, const EnsembleHeader& header,
                    const std::vector<DensityMatrixd>& states);
void write_ensemble_file(const std::string& path, const EnsembleHeader& header,
                         const std::vector<DensityMatrixd>& states);
std::vector<DensityMatrixd> read_ensemble_file(const std::string& path,
                                               EnsembleHeader* header = nullptr);

/// Reads either a single state JSON document or an ensemble JSON-lines file.
std::vector<DensityMatrixd> read_states(const std::string& path);

json measurement_to_json(const ProjectiveMeasurement& m);
json discord_result_to_json(const DiscordResult& r);
json bloch_to_json(const BlochRepresentation<double>& b);

/// { "kind": str, "params": {...}, "dims": [d_A, d_B] }.
json channel_descriptor_to_json(const ChannelDescriptor& d);
ChannelDescriptor channel_descriptor_from_json(const json& j);

/// Columns: step, commutator_norm, discord (empty when not evaluated), in_c0.
void write_trajectory_csv(std::ostream& out, const Trajectory& t);
void write_trajectory_csv_file(const std::string& path, const Trajectory& t);

/// Parses "2x3" into Dims.
Dims parse_dims(const std::string& text);
std::string format_dims(Dims d);

/// Shortest round-trippable decimal for a double, always with a decimal point or exponent.
std::string format_double(double x);

/// Throws IoError unless `path` can be opened for writing. Creates the file.
void ensure_writable(const std::string& path);

}  // namespace qdiscord
