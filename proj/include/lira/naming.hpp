#ifndef LIRA_NAMING_HPP
#define LIRA_NAMING_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lira {

enum class DigestAlgorithm : std::uint8_t {
  Sha256,
  Sha512,
};

inline constexpr std::size_t kPaddingSize = 8;
using Padding = std::array<std::uint8_t, kPaddingSize>;

/// Ephemeral, self-certifying chunk name: opaque service options plus a digest.
class ContentId
{
public:
  static constexpr std::size_t kMaxDigest = 64;

  ContentId() = default;

  ContentId(std::string serviceOptions, std::span<const std::uint8_t> digest);

  const std::string& serviceOptions() const { return m_serviceOptions; }

  std::span<const std::uint8_t>
  digest() const
  {
    return {m_digest.data(), m_size};
  }

  /// Lowercase hex of the digest; service options, if any, are prefixed with '/'.
  std::string
  toHex() const;

  /// First `n` hex digits of the digest.
  std::string
  shortHex(std::size_t n = 8) const;

  friend bool
  operator==(const ContentId& a, const ContentId& b)
  {
    return a.m_size == b.m_size && a.m_serviceOptions == b.m_serviceOptions &&
           std::equal(a.m_digest.begin(), a.m_digest.begin() + a.m_size, b.m_digest.begin());
  }

private:
  std::string m_serviceOptions;
  std::array<std::uint8_t, kMaxDigest> m_digest{};
  std::size_t m_size = 0;
};

struct ChunkDescriptor
{
  std::uint32_t objectId = 0;
  std::uint32_t chunkIndex = 0;
  std::uint64_t version = 0;
  Padding padding{};
};

/// cid = digest(payload || padding || version as 8 big-endian bytes).
ContentId
mintCid(const ChunkDescriptor& d, std::span<const std::uint8_t> payload,
        DigestAlgorithm algorithm = DigestAlgorithm::Sha256, const std::string& serviceOptions = {});

bool
verifyCid(std::span<const std::uint8_t> payload, const Padding& padding, std::uint64_t version,
          const ContentId& id);

/// max(tMin, tBase / max(1, count)).
double
transitionInterval(std::uint64_t requestCount, double tBase, double tMin);

/// Deterministic stand-in bytes for a chunk's content at a given version.
std::vector<std::uint8_t>
syntheticPayload(std::uint32_t objectId, std::uint32_t chunkIndex, std::uint64_t version);

} // namespace lira

template<>
struct std::hash<lira::ContentId>
{
  std::size_t
  operator()(const lira::ContentId& id) const noexcept;
};

#endif // LIRA_NAMING_HPP
