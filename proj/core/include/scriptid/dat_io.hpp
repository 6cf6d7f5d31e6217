#ifndef SCRIPTID_DAT_IO_HPP
#define SCRIPTID_DAT_IO_HPP

#include <string>
#include <string_view>

#include "scriptid/raster.hpp"

namespace scriptid {

/**
 * DAT bitmap codec. The format is bit-exact:
 *
 *   line 1: "width<SP>height<LF>" as plain ASCII decimals
 *   then height lines of exactly width characters from {'0','1'}, LF-ended
 *   '0' encodes foreground ink, '1' encodes background
 *
 * save_dat(load_dat(x)) == x byte-for-byte for every accepted input, and
 * load_dat(save_dat(img)) == img for every image. Malformed headers, row
 * length mismatches and illegal characters are rejected with the offending
 * line number in the message.
 */
std::string save_dat(const BinaryImage& img);
BinaryImage load_dat(std::string_view bytes);

/// 8-bit binary PGM (P5), maxval up to 255. Comments after '#' accepted.
std::string save_pgm(const GrayImage& img);
GrayImage load_pgm(std::string_view bytes);

/// Renders a mask as a grayscale image: foreground 0, background 255.
GrayImage to_gray(const BinaryImage& img);

// File helpers. Loaders pick the decoder from the file contents, writers
// from the requested format.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

BinaryImage load_dat_file(const std::string& path);
void save_dat_file(const std::string& path, const BinaryImage& img);
GrayImage load_pgm_file(const std::string& path);
void save_pgm_file(const std::string& path, const GrayImage& img);

/// Reads a page image as a mask: PGM input is binarized, DAT is decoded.
BinaryImage load_page_mask(const std::string& path);

/// Reads a page as grayscale: DAT input maps to {0, 255}.
GrayImage load_page_gray(const std::string& path);

} // namespace scriptid

#endif // SCRIPTID_DAT_IO_HPP
