#pragma once

#include <cstdint>
#include <string_view>

namespace lassodet {

/// Counter-based random stream.
///
/// A stream is fully determined by (master_seed, stream_id): the k-th draw is a
/// pure function of the key and k, so streams can be consumed in any order or on
/// any thread without changing what each one produces. Normal variates come from
/// inverting the standard normal CDF, which keeps sequences identical across
/// platforms.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    std::uint64_t position() const noexcept { return counter_; }

    std::uint64_t next_u64() noexcept;
    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    double normal() noexcept;
    double normal(double mean, double sd) noexcept { return mean + sd * normal(); }

    /// Independent child stream; same master seed, derived id.
    RngStream substream(std::uint64_t tag) const noexcept;

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Reserved stream ids. Per-replicate streams use the replicate index directly.
inline constexpr std::uint64_t kDesignStream = 0xD35161A7ULL << 32;

/// Parses a 64-bit seed written in decimal or 0x-prefixed hex.
/// Throws DomainError on anything else.
std::uint64_t parse_seed(std::string_view text);

}  // namespace lassodet
