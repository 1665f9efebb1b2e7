#include "svedefog/imageio.hpp"

#include <png.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace svedefog {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
    throw std::runtime_error("read_image: " + reason + " (" + path + ")");
}

std::string read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open file");
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    return bytes;
}

// Netpbm token scanner: skips whitespace and '#' comments.
struct PnmScanner {
    const std::string& bytes;
    size_t pos;

    std::string next_token(const std::string& path) {
        while (pos < bytes.size()) {
            const char c = bytes[pos];
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
        const size_t start = pos;
        while (pos < bytes.size() &&
               !std::isspace(static_cast<unsigned char>(bytes[pos])))
            ++pos;
        if (start == pos) fail(path, "truncated file: missing header field");
        return bytes.substr(start, pos - start);
    }

    long next_int(const std::string& path) {
        const std::string tok = next_token(path);
        char* end = nullptr;
        const long v = std::strtol(tok.c_str(), &end, 10);
        if (end == tok.c_str() || *end != '\0')
            fail(path, "malformed header field '" + tok + "'");
        return v;
    }
};

int bits_for_maxval(long maxval) {
    int bits = 1;
    while ((1L << bits) - 1 < maxval) ++bits;
    return bits;
}

ImageU16 read_pgm(const std::string& path, const std::string& bytes) {
    PnmScanner sc{bytes, 2};  // past "P5"
    const long w = sc.next_int(path);
    const long h = sc.next_int(path);
    const long maxval = sc.next_int(path);
    if (w <= 0 || h <= 0) fail(path, "dimension mismatch: non-positive size in header");
    if (maxval <= 0 || maxval > 65535) fail(path, "unsupported format: PGM maxval " + std::to_string(maxval));
    if (sc.pos >= bytes.size()) fail(path, "truncated file: no sample data");
    ++sc.pos;  // single whitespace after maxval

    const bool wide = maxval > 255;
    const size_t npix = static_cast<size_t>(w) * h;
    const size_t need = npix * (wide ? 2 : 1);
    if (bytes.size() - sc.pos < need)
        fail(path, "truncated file: header promises " + std::to_string(need) +
                       " bytes, got " + std::to_string(bytes.size() - sc.pos));

    ImageU16 img(static_cast<int>(w), static_cast<int>(h), bits_for_maxval(maxval));
    const unsigned char* p =
        reinterpret_cast<const unsigned char*>(bytes.data()) + sc.pos;
    if (wide) {
        for (size_t i = 0; i < npix; ++i)
            img.data[i] = static_cast<uint16_t>((p[2 * i] << 8) | p[2 * i + 1]);
    } else {
        for (size_t i = 0; i < npix; ++i) img.data[i] = p[i];
    }
    for (uint16_t v : img.data)
        if (v > maxval)
            fail(path, "malformed data: sample exceeds header maxval");
    return img;
}

float swap_float(float f) {
    uint32_t u;
    std::memcpy(&u, &f, 4);
    u = __builtin_bswap32(u);
    std::memcpy(&f, &u, 4);
    return f;
}

ImageF read_pfm(const std::string& path, const std::string& bytes) {
    const bool color = bytes[1] == 'F';
    PnmScanner sc{bytes, 2};
    const long w = sc.next_int(path);
    const long h = sc.next_int(path);
    const std::string scale_tok = sc.next_token(path);
    const double scale = std::strtod(scale_tok.c_str(), nullptr);
    if (scale == 0.0) fail(path, "malformed header field '" + scale_tok + "'");
    if (w <= 0 || h <= 0) fail(path, "dimension mismatch: non-positive size in header");
    ++sc.pos;

    const bool file_le = scale < 0.0;
    constexpr bool host_le = std::endian::native == std::endian::little;
    const int ch = color ? 3 : 1;
    const size_t nfloats = static_cast<size_t>(w) * h * ch;
    if (bytes.size() - sc.pos < nfloats * 4)
        fail(path, "truncated file: expected " + std::to_string(nfloats * 4) +
                       " bytes of samples");

    std::vector<float> raw(nfloats);
    std::memcpy(raw.data(), bytes.data() + sc.pos, nfloats * 4);
    if (file_le != host_le)
        for (float& f : raw) f = swap_float(f);

    // PFM stores scanlines bottom-to-top.
    ImageF img(static_cast<int>(w), static_cast<int>(h));
    for (long y = 0; y < h; ++y) {
        const float* src = raw.data() + static_cast<size_t>(h - 1 - y) * w * ch;
        double* dst = img.row(static_cast<int>(y));
        if (color) {
            for (long x = 0; x < w; ++x)
                dst[x] = 0.2126 * src[3 * x] + 0.7152 * src[3 * x + 1] +
                         0.0722 * src[3 * x + 2];
        } else {
            for (long x = 0; x < w; ++x) dst[x] = src[x];
        }
    }
    return img;
}

struct PngReadCtx {
    const unsigned char* data;
    size_t size;
    size_t pos;
};

void png_mem_read(png_structp png, png_bytep out, png_size_t n) {
    auto* ctx = static_cast<PngReadCtx*>(png_get_io_ptr(png));
    if (ctx->pos + n > ctx->size)
        png_error(png, "truncated file");
    std::memcpy(out, ctx->data + ctx->pos, n);
    ctx->pos += n;
}

ImageU16 read_png_gray(const std::string& path, const std::string& bytes) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "libpng init failure");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        fail(path, "libpng init failure");
    }
    std::vector<std::vector<png_byte>> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "truncated file: PNG decode error");
    }

    PngReadCtx ctx{reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), 0};
    png_set_read_fn(png, &ctx, png_mem_read);
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int color = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    depth = png_get_bit_depth(png, info);
    const int channels = png_get_channels(png, info);
    if (depth != 8 && depth != 16) fail(path, "unsupported format: PNG bit depth");
    if (channels != 1 && channels != 3) fail(path, "unsupported format: PNG channel layout");

    rows.assign(h, std::vector<png_byte>(png_get_rowbytes(png, info)));
    std::vector<png_bytep> row_ptrs(h);
    for (png_uint_32 y = 0; y < h; ++y) row_ptrs[y] = rows[y].data();
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    ImageU16 img(static_cast<int>(w), static_cast<int>(h), depth);
    const double maxv = (1u << depth) - 1u;
    for (png_uint_32 y = 0; y < h; ++y) {
        const png_byte* src = rows[y].data();
        for (png_uint_32 x = 0; x < w; ++x) {
            double px[3];
            for (int c = 0; c < channels; ++c) {
                if (depth == 16)
                    px[c] = (src[(x * channels + c) * 2] << 8) | src[(x * channels + c) * 2 + 1];
                else
                    px[c] = src[x * channels + c];
            }
            double v = (channels == 3)
                           ? 0.2126 * px[0] + 0.7152 * px[1] + 0.0722 * px[2]
                           : px[0];
            if (v > maxv) v = maxv;
            img.at(static_cast<int>(x), static_cast<int>(y)) =
                static_cast<uint16_t>(std::lround(v));
        }
    }
    return img;
}

const unsigned char kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

}  // namespace

AnyImage read_image(const std::string& path) {
    const std::string bytes = read_all(path);
    if (bytes.size() < 8) fail(path, "truncated file: too short for any header");
    if (bytes[0] == 'P' && bytes[1] == '5') return read_pgm(path, bytes);
    if (bytes[0] == 'P' && (bytes[1] == 'f' || bytes[1] == 'F'))
        return read_pfm(path, bytes);
    if (std::memcmp(bytes.data(), kPngMagic, 8) == 0) return read_png_gray(path, bytes);
    fail(path, "unsupported format: unknown magic bytes");
}

ImageF read_image_f(const std::string& path) {
    AnyImage any = read_image(path);
    if (std::holds_alternative<ImageF>(any)) return std::get<ImageF>(std::move(any));
    return normalize(std::get<ImageU16>(any));
}

ImageU16 read_image_u16(const std::string& path) {
    AnyImage any = read_image(path);
    if (!std::holds_alternative<ImageU16>(any))
        throw std::runtime_error("read_image: expected integer image, got float PFM (" + path + ")");
    return std::get<ImageU16>(std::move(any));
}

void write_pgm(const std::string& path, const ImageU16& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
    const unsigned maxval = img.max_value();
    out << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
    if (maxval > 255) {
        std::vector<unsigned char> buf(img.data.size() * 2);
        for (size_t i = 0; i < img.data.size(); ++i) {
            buf[2 * i] = static_cast<unsigned char>(img.data[i] >> 8);
            buf[2 * i + 1] = static_cast<unsigned char>(img.data[i] & 0xFF);
        }
        out.write(reinterpret_cast<const char*>(buf.data()), buf.size());
    } else {
        std::vector<unsigned char> buf(img.data.size());
        for (size_t i = 0; i < img.data.size(); ++i)
            buf[i] = static_cast<unsigned char>(img.data[i]);
        out.write(reinterpret_cast<const char*>(buf.data()), buf.size());
    }
    if (!out) throw std::runtime_error("write_pgm: short write to " + path);
}

void write_pfm(const std::string& path, const ImageF& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pfm: cannot open " + path);
    out << "Pf\n" << img.width << " " << img.height << "\n-1.0\n";
    std::vector<float> row(img.width);
    for (int y = img.height - 1; y >= 0; --y) {
        const double* src = img.row(y);
        for (int x = 0; x < img.width; ++x) row[x] = static_cast<float>(src[x]);
        if constexpr (std::endian::native == std::endian::big)
            for (float& f : row) f = swap_float(f);
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * 4));
    }
    if (!out) throw std::runtime_error("write_pfm: short write to " + path);
}

void write_png(const std::string& path, const ImageU16& img) {
    if (img.bit_depth != 8 && img.bit_depth != 16)
        throw std::invalid_argument("write_png: only 8- and 16-bit grayscale supported");
    std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), std::fclose);
    if (!fp) throw std::runtime_error("write_png: cannot open " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_write_struct(&png, &info);
        throw std::runtime_error("write_png: libpng init failure");
    }
    std::vector<std::vector<png_byte>> rows(img.height);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("write_png: encode error for " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, img.bit_depth,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    for (int y = 0; y < img.height; ++y) {
        rows[y].resize(static_cast<size_t>(img.width) * (img.bit_depth == 16 ? 2 : 1));
        for (int x = 0; x < img.width; ++x) {
            const uint16_t v = img.at(x, y);
            if (img.bit_depth == 16) {
                rows[y][2 * x] = static_cast<png_byte>(v >> 8);
                rows[y][2 * x + 1] = static_cast<png_byte>(v & 0xFF);
            } else {
                rows[y][x] = static_cast<png_byte>(v);
            }
        }
        png_write_row(png, rows[y].data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace svedefog
