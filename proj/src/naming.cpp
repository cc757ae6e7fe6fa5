#include "lira/naming.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstring>
#include <memory>
#include <stdexcept>

namespace lira {

ContentId::ContentId(std::string serviceOptions, std::span<const std::uint8_t> digest)
  : m_serviceOptions(std::move(serviceOptions))
  , m_size(digest.size())
{
  if (digest.size() == 0 || digest.size() > kMaxDigest)
    throw std::invalid_argument("bad digest length " + std::to_string(digest.size()));
  std::copy(digest.begin(), digest.end(), m_digest.begin());
}

std::string
ContentId::toHex() const
{
  std::string out;
  if (!m_serviceOptions.empty())
    out = m_serviceOptions + "/";
  return out + shortHex(m_size * 2);
}

std::string
ContentId::shortHex(std::size_t n) const
{
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (std::size_t i = 0; i < m_size && out.size() < n; ++i) {
    out += digits[m_digest[i] >> 4];
    if (out.size() < n)
      out += digits[m_digest[i] & 0xf];
  }
  return out;
}

namespace {

std::vector<std::uint8_t>
computeDigest(std::span<const std::uint8_t> payload, const Padding& padding, std::uint64_t version,
              DigestAlgorithm algorithm)
{
  std::array<std::uint8_t, 8> counter{};
  for (int i = 7; i >= 0; --i) {
    counter[i] = static_cast<std::uint8_t>(version & 0xff);
    version >>= 8;
  }

  const EVP_MD* md = algorithm == DigestAlgorithm::Sha512 ? EVP_sha512() : EVP_sha256();
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::vector<std::uint8_t> out(EVP_MAX_MD_SIZE);
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), md, nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), payload.data(), payload.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), padding.data(), padding.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), counter.data(), counter.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1)
    throw std::runtime_error("digest computation failed");
  out.resize(len);
  return out;
}

DigestAlgorithm
algorithmForLength(std::size_t n)
{
  return n == 64 ? DigestAlgorithm::Sha512 : DigestAlgorithm::Sha256;
}

} // namespace

ContentId
mintCid(const ChunkDescriptor& d, std::span<const std::uint8_t> payload, DigestAlgorithm algorithm,
        const std::string& serviceOptions)
{
  if (payload.empty())
    throw std::invalid_argument("cannot name an empty payload");
  auto digest = computeDigest(payload, d.padding, d.version, algorithm);
  return ContentId(serviceOptions, digest);
}

bool
verifyCid(std::span<const std::uint8_t> payload, const Padding& padding, std::uint64_t version,
          const ContentId& id)
{
  auto expect = id.digest();
  if (expect.size() != 32 && expect.size() != 64)
    return false;
  auto digest = computeDigest(payload, padding, version, algorithmForLength(expect.size()));
  return std::equal(digest.begin(), digest.end(), expect.begin(), expect.end());
}

double
transitionInterval(std::uint64_t requestCount, double tBase, double tMin)
{
  if (!(tMin > 0.0) || tBase < tMin)
    throw std::invalid_argument("transition interval needs tBase >= tMin > 0");
  auto c = static_cast<double>(std::max<std::uint64_t>(1, requestCount));
  return std::max(tMin, tBase / c);
}

std::vector<std::uint8_t>
syntheticPayload(std::uint32_t objectId, std::uint32_t chunkIndex, std::uint64_t version)
{
  std::vector<std::uint8_t> out(32);
  std::uint64_t x = (static_cast<std::uint64_t>(objectId) << 32) ^ chunkIndex ^
                    (version * 0x9e3779b97f4a7c15ULL);
  for (std::size_t i = 0; i < out.size(); ++i) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 29;
    out[i] = static_cast<std::uint8_t>(x);
  }
  return out;
}

} // namespace lira

std::size_t
std::hash<lira::ContentId>::operator()(const lira::ContentId& id) const noexcept
{
  std::size_t h = 0;
  auto d = id.digest();
  std::memcpy(&h, d.data(), std::min(sizeof(h), d.size()));
  return h ^ std::hash<std::string>{}(id.serviceOptions());
}
