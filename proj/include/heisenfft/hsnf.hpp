#pragma once

#include <iosfwd>
#include <string>

#include "heisenfft/field.hpp"

namespace heisenfft {

// Field dump format "HSNF": magic "HSNF1\n", then little-endian
//   u32 n, u32 N, f64 L, u32 M (0 for a bare Slice2N), f64 T_len,
// then interleaved f64 (re, im) in row-major order.  Round-trips bit-exactly.

void write_hsnf(std::ostream& os, const Slice2N& slice);
void write_hsnf(std::ostream& os, const HeisenbergSample& sample);
void write_hsnf_file(const std::string& path, const Slice2N& slice);
void write_hsnf_file(const std::string& path, const HeisenbergSample& sample);

/// Peeks the M header field: 0 means the stream holds a bare Slice2N.
bool hsnf_is_slice(std::istream& is);

Slice2N read_hsnf_slice(std::istream& is);
HeisenbergSample read_hsnf_sample(std::istream& is);
Slice2N read_hsnf_slice_file(const std::string& path);
HeisenbergSample read_hsnf_sample_file(const std::string& path);

} // namespace heisenfft
