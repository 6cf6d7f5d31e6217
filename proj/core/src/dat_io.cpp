#include "scriptid/dat_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace scriptid {

namespace {

// Parses an unsigned ASCII decimal without sign or leading zeros, so the
// accepted header grammar round-trips byte-exactly.
bool parse_canonical_uint(std::string_view s, int& out) {
    if (s.empty() || s.size() > 9) return false;
    if (s.size() > 1 && s[0] == '0') return false;
    long v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = static_cast<int>(v);
    return true;
}

} // namespace

std::string save_dat(const BinaryImage& img) {
    std::string out;
    out.reserve(static_cast<std::size_t>(img.width() + 1) * img.height() + 16);
    out += std::to_string(img.width());
    out += ' ';
    out += std::to_string(img.height());
    out += '\n';
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x)
            out += img.at(x, y) ? '0' : '1';
        out += '\n';
    }
    return out;
}

BinaryImage load_dat(std::string_view bytes) {
    std::size_t pos = bytes.find('\n');
    if (pos == std::string_view::npos)
        throw InputError("DAT line 1: missing header line");
    std::string_view header = bytes.substr(0, pos);
    std::size_t sp = header.find(' ');
    int w = 0, h = 0;
    if (sp == std::string_view::npos ||
        !parse_canonical_uint(header.substr(0, sp), w) ||
        !parse_canonical_uint(header.substr(sp + 1), h))
        throw InputError("DAT line 1: malformed header, expected 'width height'");
    if (w < 1 || h < 1)
        throw InputError("DAT line 1: dimensions must be positive");

    BinaryImage img(w, h);
    std::size_t cursor = pos + 1;
    for (int row = 0; row < h; ++row) {
        std::size_t eol = bytes.find('\n', cursor);
        if (eol == std::string_view::npos)
            throw InputError("DAT line " + std::to_string(row + 2) +
                             ": missing row " + std::to_string(row + 1));
        std::string_view line = bytes.substr(cursor, eol - cursor);
        if (static_cast<int>(line.size()) != w)
            throw InputError("DAT line " + std::to_string(row + 2) + ": row " +
                             std::to_string(row + 1) + " has " +
                             std::to_string(line.size()) + " characters, expected " +
                             std::to_string(w));
        for (int x = 0; x < w; ++x) {
            char c = line[x];
            if (c != '0' && c != '1')
                throw InputError("DAT line " + std::to_string(row + 2) +
                                 ": illegal character '" + std::string(1, c) +
                                 "' at row " + std::to_string(row + 1) +
                                 ", column " + std::to_string(x + 1));
            img.set(x, row, c == '0');
        }
        cursor = eol + 1;
    }
    if (cursor != bytes.size())
        throw InputError("DAT line " + std::to_string(h + 2) +
                         ": trailing data after last row");
    return img;
}

std::string save_pgm(const GrayImage& img) {
    std::string out = "P5\n" + std::to_string(img.width()) + " " +
                      std::to_string(img.height()) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.pixels().data()),
               img.pixels().size());
    return out;
}

namespace {

// PGM header tokens may be separated by whitespace and '#' comments.
int next_pgm_token(std::string_view bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        char c = bytes[pos];
        if (c == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos])))
        throw InputError("PGM: malformed header");
    long v = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
        v = v * 10 + (bytes[pos] - '0');
        if (v > 1000000) throw InputError("PGM: header value out of range");
        ++pos;
    }
    return static_cast<int>(v);
}

} // namespace

GrayImage load_pgm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        throw InputError("PGM: not a P5 file");
    std::size_t pos = 2;
    int w = next_pgm_token(bytes, pos);
    int h = next_pgm_token(bytes, pos);
    int maxval = next_pgm_token(bytes, pos);
    if (w < 1 || h < 1) throw InputError("PGM: dimensions must be positive");
    if (maxval < 1 || maxval > 255)
        throw InputError("PGM: only 8-bit maxval supported");
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
        throw InputError("PGM: malformed header");
    ++pos; // single whitespace before raster data
    std::size_t need = static_cast<std::size_t>(w) * h;
    if (bytes.size() - pos < need)
        throw InputError("PGM: truncated pixel data");
    GrayImage img(w, h);
    for (std::size_t i = 0; i < need; ++i)
        img.pixels()[i] = static_cast<std::uint8_t>(bytes[pos + i]);
    return img;
}

GrayImage to_gray(const BinaryImage& img) {
    GrayImage out(img.width(), img.height(), 255);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (img.at(x, y)) out.set(x, y, 0);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write file: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InputError("write failed: " + path);
}

BinaryImage load_dat_file(const std::string& path) {
    return load_dat(read_file(path));
}

void save_dat_file(const std::string& path, const BinaryImage& img) {
    write_file(path, save_dat(img));
}

GrayImage load_pgm_file(const std::string& path) {
    return load_pgm(read_file(path));
}

void save_pgm_file(const std::string& path, const GrayImage& img) {
    write_file(path, save_pgm(img));
}

BinaryImage load_page_mask(const std::string& path) {
    std::string bytes = read_file(path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5')
        return binarize(load_pgm(bytes));
    return load_dat(bytes);
}

GrayImage load_page_gray(const std::string& path) {
    std::string bytes = read_file(path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5')
        return load_pgm(bytes);
    return to_gray(load_dat(bytes));
}

} // namespace scriptid
