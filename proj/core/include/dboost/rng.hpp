// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#ifndef DBOOST_RNG_HPP_
#define DBOOST_RNG_HPP_

#include <cstdint>

namespace dboost {

// SplitMix64 mixing step. Used to derive decorrelated sub-seeds from a base
// seed so that adding or removing one consumer does not shift the streams of
// the others.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace dboost

#endif  // DBOOST_RNG_HPP_
