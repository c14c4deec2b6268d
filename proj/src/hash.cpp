#include "sleepspike/hash.hpp"

#include <stdexcept>

#include <openssl/evp.h>
#include <openssl/hmac.h>

namespace sleepspike {

Digest sha256(std::span<const std::uint8_t> data) {
   Digest out{};
   unsigned int len = 0;
   if(EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != out.size()) {
      throw std::runtime_error("sha256: digest failed");
   }
   return out;
}

Digest hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> msg) {
   Digest out{};
   unsigned int len = 0;
   static const std::uint8_t empty = 0;
   const std::uint8_t* k = key.empty() ? &empty : key.data();
   if(HMAC(EVP_sha256(), k, static_cast<int>(key.size()), msg.data(), msg.size(), out.data(), &len) == nullptr ||
      len != out.size()) {
      throw std::runtime_error("hmac_sha256: mac failed");
   }
   return out;
}

}  // namespace sleepspike
