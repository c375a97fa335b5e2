#include "cofee/service/credentials.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <vector>

#include "cofee/error.hpp"

namespace cofee::service {
namespace {

std::string hex(const unsigned char* data, std::size_t n) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    out += kDigits[data[i] >> 4];
    out += kDigits[data[i] & 0xf];
  }
  return out;
}

std::string random_hex(std::size_t bytes) {
  std::vector<unsigned char> buf(bytes);
  if (RAND_bytes(buf.data(), static_cast<int>(buf.size())) != 1) {
    throw Error("random number generator failure");
  }
  return hex(buf.data(), buf.size());
}

}  // namespace

std::string generate_token() { return random_hex(32); }

std::string random_id() { return random_hex(8); }

std::string hash_token(std::string_view token) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int n = 0;
  if (EVP_Digest(token.data(), token.size(), digest, &n, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failure");
  }
  return hex(digest, n);
}

}  // namespace cofee::service
