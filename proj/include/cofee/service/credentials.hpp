#pragma once

#include <string>
#include <string_view>

namespace cofee::service {

// 32 random bytes, hex encoded.
std::string generate_token();

// Lowercase hex SHA-256; only this digest is stored.
std::string hash_token(std::string_view token);

// Short random hex id (8 bytes).
std::string random_id();

}  // namespace cofee::service
