#pragma once
#include <string>

#include <critnls/trajectory.hpp>

namespace critnls {

// Self-describing binary containers (fixed 8-byte magic, explicit
// little-endian 64-bit payloads) with lossless double round trips.
void save_field(const Field& f, const std::string& path);
Field load_field(const std::string& path);

void save_trajectory(const Trajectory& t, const std::string& path);
Trajectory load_trajectory(const std::string& path);

}  // namespace critnls
