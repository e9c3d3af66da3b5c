#pragma once

#include <string>
#include <vector>

#include "vmiq/image.hpp"

namespace vmiq {

/// Subjective opinion scores keyed by image identifier, in file order.
struct OpinionTable {
    std::vector<std::string> ids;
    std::vector<double> scores;

    std::size_t size() const { return ids.size(); }
    /// Index of id, or -1 when absent.
    long find(const std::string& id) const;
};

/// Loads a raster image and converts it to grayscale in [0, 1]. The format is
/// chosen by magic bytes, not extension: PNG, Windows BMP (uncompressed 8-bit
/// paletted, 24-bit, 32-bit), or PGM (P2/P5, any maxval up to 65535). Color
/// inputs are reduced with BT.601 luma; gray inputs pass through as v/maxval.
/// Throws IoError when the file cannot be read, DecodeError for unsupported
/// or corrupt contents.
GrayImage load_image(const std::string& path);

/// Writes a binary PGM (P5, maxval 255); samples are scaled by 255 and
/// rounded half away from zero. Throws IoError on write failure.
void save_pgm(const GrayImage& img, const std::string& path);

/// Parses a two-column opinion file: one `identifier score` pair per line,
/// separated by whitespace and/or commas. Blank lines and lines starting with
/// '#' are skipped. Throws ParseError (naming the line) on malformed rows,
/// non-finite scores, or duplicate identifiers.
OpinionTable load_opinion_table(const std::string& path);

}  // namespace vmiq
