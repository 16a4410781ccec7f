#include "mdsrel/random_stream.hpp"

namespace mdsrel
{

namespace
{

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t rotl(std::uint64_t x, int k)
{
    return (x << k) | (x >> (64 - k));
}

} // namespace

std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RandomStream::RandomStream(std::uint64_t key)
{
    std::uint64_t sm = key;
    for (auto& word : s_)
    {
        sm += kGolden;
        word = mix64(sm);
    }
}

RandomStream RandomStream::for_trial(std::uint64_t seed, std::uint64_t trial)
{
    return RandomStream(mix64(seed ^ mix64(trial)));
}

std::uint64_t RandomStream::next()
{
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RandomStream::uniform_open()
{
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace mdsrel
