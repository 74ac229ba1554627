#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "contest/sim.hpp"

namespace contest {

/// Published digest of a sealed answer key. The salt stays in the truth file.
struct TruthCommitment {
  std::string digest;  // hex SHA-256
  std::string salt;    // hex, 128 bits
};

std::string sha256_hex(std::string_view bytes);

/// 128-bit salt derived from `seed`, so repeated runs are byte-identical.
std::string derive_salt(std::uint64_t seed);
/// 128-bit salt from the operating system entropy source.
std::string random_salt();

/// SHA-256 over the salt-free canonical truth JSON followed by the salt.
TruthCommitment commit(const GroundTruth& truth, const std::string& salt);
bool verify(const GroundTruth& truth, const std::string& salt, std::string_view digest);

}  // namespace contest
