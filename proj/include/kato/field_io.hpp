#pragma once

#include "kato/grid.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kato {

class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::uint64_t offset);
    std::uint64_t offset() const { return offset_; }

private:
    std::uint64_t offset_;
};

// KSLF layout, all little endian:
//   "KSLF" | version u32 | n u32 | N u32 | L f64 |
//   (version 2 only) S u32 | S times f64 |
//   interleaved (re, im) f64 samples, row-major, slice-major for version 2.
constexpr std::uint32_t kslf_field_version = 1;
constexpr std::uint32_t kslf_spacetime_version = 2;

std::string encode_field(const Field& f);
std::string encode_spacetime(const SpacetimeField& u);
Field decode_field(const std::string& bytes);
SpacetimeField decode_spacetime(const std::string& bytes);

void write_field(const std::string& path, const Field& f);
void write_spacetime(const std::string& path, const SpacetimeField& u);
Field read_field(const std::string& path);
SpacetimeField read_spacetime(const std::string& path);
// Reads either version; a plain field becomes a single-slice record at t = 0.
SpacetimeField read_any(const std::string& path);

}  // namespace kato
