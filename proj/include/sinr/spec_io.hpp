#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sinr/model.hpp"

namespace sinr {

/// Everything a channel spec file can carry. For time-varying files
/// (`states` present) `channel` holds the first state and `time_varying`
/// the full set.
struct LoadedSpec {
  ChannelModel channel;
  std::vector<PowerConstraint> constraints;
  std::optional<TimeVaryingChannel> time_varying;
};

/// Parses and validates a channel spec file (JSON): `gains` (n x n),
/// `noise` (length n), optional `constraints` [{`users` 1-based, `bound`}],
/// or `states` [{`gains`, `prob`}] in place of `gains`. Errors carry the
/// offending field path.
LoadedSpec load_channel_spec(const std::string& path);

/// Same, from an in-memory document.
LoadedSpec parse_channel_spec(const std::string& text);

/// Inverse of parse_channel_spec; numbers round-trip bit-exactly.
std::string serialize_channel_spec(const LoadedSpec& spec);

}  // namespace sinr
