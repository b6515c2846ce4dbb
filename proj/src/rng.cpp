#include "lassodet/rng.hpp"

#include <charconv>
#include <string>

#include "lassodet/errors.hpp"
#include "lassodet/stats.hpp"

namespace lassodet {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      key_(mix64(mix64(master_seed + 0x6A09E667F3BCC909ULL) +
                 mix64(stream_id + 0xBB67AE8584CAA73BULL))) {}

std::uint64_t RngStream::next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double RngStream::uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() noexcept { return stats::normal_quantile(uniform()); }

RngStream RngStream::substream(std::uint64_t tag) const noexcept {
    return RngStream(master_seed_, mix64(stream_id_ ^ mix64(tag + 0x3C6EF372FE94F82BULL)));
}

std::uint64_t parse_seed(std::string_view text) {
    std::string_view digits = text;
    int base = 10;
    if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
        digits.remove_prefix(2);
        base = 16;
    }
    std::uint64_t value = 0;
    const auto* end = digits.data() + digits.size();
    auto [ptr, ec] = std::from_chars(digits.data(), end, value, base);
    if (digits.empty() || ec != std::errc{} || ptr != end) {
        throw DomainError("invalid seed '" + std::string(text) +
                          "': expected a 64-bit decimal or 0x-hex integer");
    }
    return value;
}

}  // namespace lassodet
