#include "egoscene/image_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

namespace egoscene {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f)
    throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  return f;
}

void skip_pgm_space(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      in.get();
    } else {
      return;
    }
  }
}

int read_pgm_int(std::istream& in, const std::string& name, const char* field) {
  skip_pgm_space(in);
  int v = -1;
  if (!(in >> v) || v < 0)
    throw Error(ErrorKind::kParse, "'" + name + "': bad PGM " + field);
  return v;
}

Gray16Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  const std::string name = path.string();
  char magic[2];
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5')
    throw Error(ErrorKind::kParse, "'" + name + "': not a binary PGM");
  Gray16Image img;
  img.width = read_pgm_int(in, name, "width");
  img.height = read_pgm_int(in, name, "height");
  const int maxval = read_pgm_int(in, name, "maxval");
  if (maxval <= 255 || maxval > 65535)
    throw Error(ErrorKind::kParse, "'" + name + "': expected a 16-bit PGM, maxval is " +
                                       std::to_string(maxval));
  in.get();  // single whitespace before the raster
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  std::vector<unsigned char> raw(2 * n);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw Error(ErrorKind::kParse, "'" + name + "': truncated PGM raster");
  img.pixels.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    img.pixels[i] = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
  return img;
}

Gray16Image read_png(const std::filesystem::path& path) {
  const std::string name = path.string();
  FilePtr file = open_file(path, "rb");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorKind::kIo, "libpng initialisation failed");
  }
  Gray16Image img;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorKind::kParse, "'" + name + "': corrupt PNG");
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  const int depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  if (depth != 16 || color != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorKind::kParse, "'" + name +
                                       "': expected 16-bit single channel PNG, got bit depth " +
                                       std::to_string(depth) + " color type " +
                                       std::to_string(color));
  }
  img.width = static_cast<int>(png_get_image_width(png, info));
  img.height = static_cast<int>(png_get_image_height(png, info));
  png_set_swap(png);  // PNG stores big-endian samples
  png_read_update_info(png, info);
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y)
    rows[y] = reinterpret_cast<png_bytep>(img.pixels.data() + static_cast<std::size_t>(y) * img.width);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

}  // namespace

Gray16Image read_gray16(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  unsigned char magic[8] = {};
  probe.read(reinterpret_cast<char*>(magic), 8);
  if (probe.gcount() >= 8 && png_sig_cmp(magic, 0, 8) == 0) return read_png(path);
  if (probe.gcount() >= 2 && magic[0] == 'P' && magic[1] == '5') return read_pgm(path);
  throw Error(ErrorKind::kParse, "'" + path.string() + "': neither PNG nor binary PGM");
}

void write_pgm16(const std::filesystem::path& path, const Gray16Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out << "P5\n" << image.width << " " << image.height << "\n65535\n";
  std::vector<unsigned char> raw(2 * image.pixels.size());
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    raw[2 * i] = static_cast<unsigned char>(image.pixels[i] >> 8);
    raw[2 * i + 1] = static_cast<unsigned char>(image.pixels[i] & 0xff);
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw Error(ErrorKind::kIo, "short write to '" + path.string() + "'");
}

void write_png16(const std::filesystem::path& path, const Gray16Image& image) {
  FilePtr file = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorKind::kIo, "libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorKind::kIo, "failed writing PNG '" + path.string() + "'");
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), 16, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_set_swap(png);
  std::vector<std::uint16_t> pixels = image.pixels;
  std::vector<png_bytep> rows(image.height);
  for (int y = 0; y < image.height; ++y)
    rows[y] = reinterpret_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(y) * image.width);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

DepthMap load_depth(const std::filesystem::path& path, SentinelSet sentinels) {
  Gray16Image img = read_gray16(path);
  return DepthMap(img.width, img.height, std::move(img.pixels), std::move(sentinels));
}

void save_depth(const std::filesystem::path& path, const DepthMap& map) {
  Gray16Image img{map.width(), map.height(),
                  std::vector<std::uint16_t>(map.values().begin(), map.values().end())};
  if (path.extension() == ".png")
    write_png16(path, img);
  else
    write_pgm16(path, img);
}

}  // namespace egoscene
