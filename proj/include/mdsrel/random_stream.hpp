#pragma once

#include <cstdint>

namespace mdsrel
{

/// SplitMix64 output function applied to one 64-bit word.
std::uint64_t mix64(std::uint64_t z);

/**
 * xoshiro256** generator, one independent instance per simulation trial.
 *
 * Stream derivation for trial i under run seed s:
 *   key   = mix64(s ^ mix64(i))
 *   state = the first four outputs of SplitMix64 started at key
 * where mix64 is the SplitMix64 finalizer (constants 0x9e3779b97f4a7c15,
 * 0xbf58476d1ce4e5b9, 0x94d049bb133111eb, shifts 30/27/31). Uniform draws use
 * the top 53 bits of each output: u = (bits + 0.5) * 2^-53, which lies
 * strictly inside (0, 1).
 */
class RandomStream
{
  public:
    explicit RandomStream(std::uint64_t key);

    static RandomStream for_trial(std::uint64_t seed, std::uint64_t trial);

    std::uint64_t next();
    double uniform_open();

  private:
    std::uint64_t s_[4];
};

} // namespace mdsrel
