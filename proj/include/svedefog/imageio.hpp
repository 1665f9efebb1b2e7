// imageio.hpp - bit-exact image file I/O.
//
// Supported formats:
//   PGM  binary P5, 8- or 16-bit (16-bit samples big-endian per Netpbm)
//   PFM  grayscale "Pf", 32-bit float, negative scale = little-endian,
//        scanlines bottom-to-top; canonical float interchange format
//   PNG  8/16-bit grayscale; color inputs are folded to BT.709 luma
//
// Integer formats round-trip bit-exactly. Errors are reported as
// std::runtime_error with a distinct reason (unsupported format,
// truncated file, dimension mismatch).

#pragma once

#include <string>
#include <variant>

#include "svedefog/image.hpp"

namespace svedefog {

using AnyImage = std::variant<ImageU16, ImageF>;

// Dispatches on file magic. Integer formats load as ImageU16 with bit_depth
// taken from the header; PFM loads as ImageF. No silent rescaling.
AnyImage read_image(const std::string& path);

// Convenience: load as float. Integer inputs are normalized to [0,1].
ImageF read_image_f(const std::string& path);

// Convenience: load integer formats verbatim; rejects PFM.
ImageU16 read_image_u16(const std::string& path);

void write_pgm(const std::string& path, const ImageU16& img);
void write_pfm(const std::string& path, const ImageF& img);
void write_png(const std::string& path, const ImageU16& img);

}  // namespace svedefog
