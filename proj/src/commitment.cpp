#include "contest/commitment.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <memory>
#include <random>

#include "contest/errors.hpp"
#include "contest/rng.hpp"
#include "contest/serialize.hpp"

namespace contest {

namespace {

std::string hex(const unsigned char* bytes, std::size_t n) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(2 * n, '0');
  for (std::size_t i = 0; i < n; ++i) {
    out[2 * i] = digits[bytes[i] >> 4];
    out[2 * i + 1] = digits[bytes[i] & 15];
  }
  return out;
}

std::string salt_from_words(std::uint64_t a, std::uint64_t b) {
  unsigned char bytes[16];
  for (int i = 0; i < 8; ++i) {
    bytes[i] = static_cast<unsigned char>(a >> (56 - 8 * i));
    bytes[8 + i] = static_cast<unsigned char>(b >> (56 - 8 * i));
  }
  return hex(bytes, 16);
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw Error("SHA-256 computation failed");
  return hex(digest, len);
}

std::string derive_salt(std::uint64_t seed) {
  return salt_from_words(derive_seed(seed, 0x5a17), derive_seed(seed, 0x5a18));
}

std::string random_salt() {
  std::random_device rd;
  auto word = [&rd] { return (static_cast<std::uint64_t>(rd()) << 32) ^ rd(); };
  const std::uint64_t a = word();
  return salt_from_words(a, word());
}

TruthCommitment commit(const GroundTruth& truth, const std::string& salt) {
  return {sha256_hex(truth_to_json(truth) + salt), salt};
}

bool verify(const GroundTruth& truth, const std::string& salt, std::string_view digest) {
  return commit(truth, salt).digest == digest;
}

}  // namespace contest
