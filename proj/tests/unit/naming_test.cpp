#include "lira/naming.hpp"

#include <doctest.h>

#include <set>
#include <string>

using namespace lira;

namespace {

ChunkDescriptor
desc(std::uint32_t obj, std::uint32_t chunk, std::uint64_t version, std::uint8_t pad = 7)
{
  ChunkDescriptor d{obj, chunk, version, {}};
  d.padding.fill(pad);
  return d;
}

} // namespace

TEST_SUITE("naming") {

TEST_CASE("minting is deterministic and version sensitive")
{
  auto p = syntheticPayload(3, 1, 0);
  auto a = mintCid(desc(3, 1, 0), p);
  auto b = mintCid(desc(3, 1, 0), p);
  CHECK(a == b);
  CHECK(a.digest().size() == 32);
  CHECK(a.toHex().size() == 64);
  CHECK_FALSE(mintCid(desc(3, 1, 1), p) == a);
  CHECK_FALSE(mintCid(desc(3, 1, 0, 8), p) == a);
  CHECK(mintCid(desc(3, 1, 0), p, DigestAlgorithm::Sha512).digest().size() == 64);
}

TEST_CASE("a thousand descriptors give a thousand names")
{
  std::set<std::string> seen;
  std::set<std::string> prefixes;
  for (std::uint32_t i = 0; i < 1000; ++i) {
    auto p = syntheticPayload(i / 10, i % 10, 0);
    auto id = mintCid(desc(i / 10, i % 10, 0, static_cast<std::uint8_t>(i)), p);
    seen.insert(id.toHex());
    prefixes.insert(id.toHex().substr(0, 16));
  }
  CHECK(seen.size() == 1000);
  CHECK(prefixes.size() == 1000);
}

TEST_CASE("names are self-certifying")
{
  auto d = desc(9, 2, 5);
  auto p = syntheticPayload(9, 2, 5);
  auto id = mintCid(d, p);
  CHECK(verifyCid(p, d.padding, 5, id));
  auto flipped = p;
  flipped[0] ^= 1;
  CHECK_FALSE(verifyCid(flipped, d.padding, 5, id));
  CHECK_FALSE(verifyCid(p, d.padding, 4, id));
  auto pad = d.padding;
  pad[3] ^= 0x80;
  CHECK_FALSE(verifyCid(p, pad, 5, id));
}

TEST_CASE("service options are carried but not hashed")
{
  auto p = syntheticPayload(1, 0, 0);
  auto plain = mintCid(desc(1, 0, 0), p);
  auto tagged = mintCid(desc(1, 0, 0), p, DigestAlgorithm::Sha256, "qos=1");
  CHECK(tagged.serviceOptions() == "qos=1");
  CHECK(std::equal(plain.digest().begin(), plain.digest().end(), tagged.digest().begin()));
  CHECK_FALSE(plain == tagged);
}

TEST_CASE("transition interval")
{
  CHECK(transitionInterval(0, 1000, 1) == 1000);
  CHECK(transitionInterval(10, 1000, 1) == 100);
  CHECK(transitionInterval(1000000, 1000, 1) == 1);
  double prev = 1000;
  for (std::uint64_t n = 0; n < 5000; n += 7) {
    double t = transitionInterval(n, 1000, 1);
    CHECK(t <= prev);
    CHECK(t >= 1);
    prev = t;
  }
}

}
