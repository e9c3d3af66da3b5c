#include "vmiq/image_io.hpp"

#include <png.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "vmiq/errors.hpp"

namespace vmiq {

namespace {

std::vector<unsigned char> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed on " + path);
    return bytes;
}

// ---------------------------------------------------------------- PGM ------

struct PnmCursor {
    const std::vector<unsigned char>& bytes;
    std::size_t pos = 0;

    // Advances over whitespace and '#' comments, then reads one decimal token.
    int next_int(const std::string& path, const char* what) {
        while (pos < bytes.size()) {
            unsigned char c = bytes[pos];
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(c)) {
                ++pos;
            } else {
                break;
            }
        }
        std::size_t start = pos;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) ++pos;
        if (pos == start) {
            throw DecodeError(path + ": expected " + std::string(what) + " in PGM header");
        }
        int value = 0;
        auto res = std::from_chars(reinterpret_cast<const char*>(bytes.data()) + start,
                                   reinterpret_cast<const char*>(bytes.data()) + pos, value);
        if (res.ec != std::errc{}) {
            throw DecodeError(path + ": bad " + std::string(what) + " in PGM header");
        }
        return value;
    }
};

GrayImage decode_pgm(const std::vector<unsigned char>& bytes, const std::string& path) {
    bool binary = bytes[1] == '5';
    PnmCursor cur{bytes, 2};
    int width = cur.next_int(path, "width");
    int height = cur.next_int(path, "height");
    int maxval = cur.next_int(path, "maxval");
    if (width < 1 || height < 1) throw DecodeError(path + ": non-positive PGM dimensions");
    if (maxval < 1 || maxval > 65535) {
        throw DecodeError(path + ": PGM maxval " + std::to_string(maxval) + " out of range");
    }

    GrayImage img(width, height);
    std::size_t count = img.size();
    double scale = 1.0 / maxval;

    if (binary) {
        ++cur.pos;  // single whitespace byte after maxval
        int stride = maxval > 255 ? 2 : 1;
        if (bytes.size() - cur.pos < count * stride) {
            throw DecodeError(path + ": PGM raster truncated");
        }
        const unsigned char* p = bytes.data() + cur.pos;
        for (std::size_t i = 0; i < count; ++i) {
            int v = stride == 2 ? (p[2 * i] << 8) | p[2 * i + 1] : p[i];
            if (v > maxval) throw DecodeError(path + ": PGM sample exceeds maxval");
            img.data[i] = v * scale;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            int v = cur.next_int(path, "sample");
            if (v > maxval) throw DecodeError(path + ": PGM sample exceeds maxval");
            img.data[i] = v * scale;
        }
    }
    return img;
}

// ---------------------------------------------------------------- BMP ------

std::uint32_t le32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (p[1] << 8) | (p[2] << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

GrayImage decode_bmp(const std::vector<unsigned char>& bytes, const std::string& path) {
    if (bytes.size() < 54) throw DecodeError(path + ": BMP header truncated");
    std::uint32_t data_offset = le32(&bytes[10]);
    std::uint32_t dib_size = le32(&bytes[14]);
    if (dib_size < 40) throw DecodeError(path + ": unsupported BMP header variant");
    std::int32_t width = static_cast<std::int32_t>(le32(&bytes[18]));
    std::int32_t raw_height = static_cast<std::int32_t>(le32(&bytes[22]));
    std::uint16_t bpp = le16(&bytes[28]);
    std::uint32_t compression = le32(&bytes[30]);

    if (compression != 0) throw DecodeError(path + ": compressed BMP is not supported");
    if (bpp != 8 && bpp != 24 && bpp != 32) {
        throw DecodeError(path + ": unsupported BMP bit depth " + std::to_string(bpp));
    }
    bool top_down = raw_height < 0;
    std::int32_t height = top_down ? -raw_height : raw_height;
    if (width < 1 || height < 1) throw DecodeError(path + ": non-positive BMP dimensions");

    std::size_t palette_count = 0;
    const unsigned char* palette = nullptr;
    if (bpp == 8) {
        std::uint32_t clr_used = le32(&bytes[46]);
        palette_count = clr_used != 0 ? clr_used : 256;
        std::size_t palette_at = 14 + dib_size;
        if (palette_at + palette_count * 4 > bytes.size()) {
            throw DecodeError(path + ": BMP palette truncated");
        }
        palette = bytes.data() + palette_at;
    }

    std::size_t row_bytes = (static_cast<std::size_t>(width) * bpp / 8 + 3) & ~std::size_t{3};
    if (data_offset + row_bytes * height > bytes.size()) {
        throw DecodeError(path + ": BMP raster truncated");
    }

    GrayImage img(width, height);
    for (std::int32_t y = 0; y < height; ++y) {
        std::size_t src_row = top_down ? y : height - 1 - y;
        const unsigned char* row = bytes.data() + data_offset + src_row * row_bytes;
        for (std::int32_t x = 0; x < width; ++x) {
            std::uint8_t r, g, b;
            if (bpp == 8) {
                unsigned idx = row[x];
                if (idx >= palette_count) throw DecodeError(path + ": BMP palette index out of range");
                const unsigned char* entry = palette + idx * 4;  // stored B, G, R, reserved
                b = entry[0];
                g = entry[1];
                r = entry[2];
            } else {
                const unsigned char* px = row + static_cast<std::size_t>(x) * bpp / 8;
                b = px[0];
                g = px[1];
                r = px[2];
            }
            img.at(x, y) = luma8(r, g, b);
        }
    }
    return img;
}

// ---------------------------------------------------------------- PNG ------

struct PngMemory {
    const unsigned char* data;
    std::size_t size;
    std::size_t pos;
};

void png_mem_read(png_structp png, png_bytep out, png_size_t len) {
    auto* mem = static_cast<PngMemory*>(png_get_io_ptr(png));
    if (mem->pos + len > mem->size) {
        png_error(png, "read past end of buffer");
    }
    std::memcpy(out, mem->data + mem->pos, len);
    mem->pos += len;
}

GrayImage decode_png(const std::vector<unsigned char>& bytes, const std::string& path) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DecodeError(path + ": libpng initialization failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DecodeError(path + ": libpng initialization failed");
    }

    std::vector<unsigned char> pixels;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError(path + ": corrupt PNG stream");
    }

    PngMemory mem{bytes.data(), bytes.size(), 0};
    png_set_read_fn(png, &mem, png_mem_read);
    png_read_info(png, info);

    // Normalize everything to 8-bit gray or RGB(A) rows.
    png_byte color_type = png_get_color_type(png, info);
    png_byte bit_depth = png_get_bit_depth(png, info);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (bit_depth == 16) png_set_strip_16(png);
    png_read_update_info(png, info);

    png_uint_32 width = png_get_image_width(png, info);
    png_uint_32 height = png_get_image_height(png, info);
    int channels = png_get_channels(png, info);
    std::size_t row_bytes = png_get_rowbytes(png, info);

    pixels.resize(row_bytes * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + y * row_bytes;
    png_read_image(png, rows.data());
    png_destroy_read_struct(&png, &info, nullptr);

    GrayImage img(static_cast<int>(width), static_cast<int>(height));
    for (png_uint_32 y = 0; y < height; ++y) {
        const unsigned char* row = pixels.data() + y * row_bytes;
        for (png_uint_32 x = 0; x < width; ++x) {
            const unsigned char* px = row + static_cast<std::size_t>(x) * channels;
            double v;
            if (channels >= 3) {
                v = luma8(px[0], px[1], px[2]);  // alpha, if present, is ignored
            } else {
                v = px[0] / 255.0;
            }
            img.at(static_cast<int>(x), static_cast<int>(y)) = v;
        }
    }
    return img;
}

}  // namespace

GrayImage load_image(const std::string& path) {
    std::vector<unsigned char> bytes = read_file(path);
    if (bytes.size() < 8) throw DecodeError(path + ": file too short for any supported format");

    static const unsigned char png_sig[8] = {137, 'P', 'N', 'G', '\r', '\n', 26, '\n'};
    if (std::memcmp(bytes.data(), png_sig, 8) == 0) return decode_png(bytes, path);
    if (bytes[0] == 'B' && bytes[1] == 'M') return decode_bmp(bytes, path);
    if (bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5')) return decode_pgm(bytes, path);
    throw DecodeError(path + ": unrecognized image format");
}

void save_pgm(const GrayImage& img, const std::string& path) {
    img.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> row(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        row[i] = static_cast<unsigned char>(std::lround(img.data[i] * 255.0));
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    if (!out) throw IoError("write failed on " + path);
}

long OpinionTable::find(const std::string& id) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == id) return static_cast<long>(i);
    }
    return -1;
}

OpinionTable load_opinion_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    OpinionTable table;
    std::unordered_map<std::string, int> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        for (char& c : line) {
            if (c == ',' || c == '\t' || c == '\r') c = ' ';
        }
        std::istringstream ss(line);
        std::string id, score_text, extra;
        if (!(ss >> id)) continue;  // blank line
        if (id[0] == '#') continue;
        if (!(ss >> score_text)) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": missing score");
        }
        if (ss >> extra) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": trailing content '" +
                             extra + "'");
        }
        double score = 0.0;
        auto res = std::from_chars(score_text.data(), score_text.data() + score_text.size(), score);
        if (res.ec != std::errc{} || res.ptr != score_text.data() + score_text.size() ||
            !std::isfinite(score)) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": bad score '" + score_text +
                             "'");
        }
        auto [it, inserted] = seen.emplace(id, line_no);
        if (!inserted) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": duplicate identifier '" +
                             id + "' (first seen on line " + std::to_string(it->second) + ")");
        }
        table.ids.push_back(id);
        table.scores.push_back(score);
    }
    return table;
}

}  // namespace vmiq
