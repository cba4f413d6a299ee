#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "egoscene/image_io.hpp"

using namespace egoscene;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "egoscene_image_io";
  fs::create_directories(dir);
  return dir / name;
}

Gray16Image pattern(int w, int h) {
  Gray16Image img{w, h, std::vector<std::uint16_t>(static_cast<std::size_t>(w) * h)};
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    img.pixels[i] = static_cast<std::uint16_t>((i * 2654435761u) & 0xFFFF);
  return img;
}

}  // namespace

TEST_SUITE("image_io") {

TEST_CASE("PGM round trip keeps every 16-bit value") {
  const Gray16Image img = pattern(17, 9);
  const fs::path p = scratch("round.pgm");
  write_pgm16(p, img);
  const Gray16Image back = read_gray16(p);
  CHECK(back.width == 17);
  CHECK(back.height == 9);
  CHECK(back.pixels == img.pixels);
}

TEST_CASE("PNG round trip keeps every 16-bit value") {
  const Gray16Image img = pattern(23, 11);
  const fs::path p = scratch("round.png");
  write_png16(p, img);
  const Gray16Image back = read_gray16(p);
  CHECK(back.width == 23);
  CHECK(back.height == 11);
  CHECK(back.pixels == img.pixels);
}

TEST_CASE("depth maps save and load with either extension") {
  DepthMap m(4, 3, DepthValue{1234});
  m.at(2, 1) = 0;
  for (const char* name : {"d.png", "d.pgm"}) {
    const fs::path p = scratch(name);
    save_depth(p, m);
    const DepthMap back = load_depth(p);
    CHECK(back == m);
    CHECK(back.is_sentinel(back.at(2, 1)));
  }
}

TEST_CASE("8-bit PGM is rejected as a parse error") {
  const fs::path p = scratch("eight.pgm");
  {
    std::ofstream out(p, std::ios::binary);
    out << "P5\n2 2\n255\n";
    out.write("\x01\x02\x03\x04", 4);
  }
  try {
    (void)read_gray16(p);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kParse);
  }
}

TEST_CASE("truncated and foreign files are parse errors") {
  const fs::path trunc = scratch("trunc.pgm");
  {
    std::ofstream out(trunc, std::ios::binary);
    out << "P5\n4 4\n65535\n";
    out.write("\x00\x01", 2);
  }
  CHECK_THROWS_AS(read_gray16(trunc), Error);
  const fs::path text = scratch("text.pgm");
  {
    std::ofstream out(text);
    out << "hello";
  }
  try {
    (void)read_gray16(text);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kParse);
  }
}

TEST_CASE("missing file is an I/O error") {
  try {
    (void)read_gray16(scratch("does_not_exist.png"));
    FAIL("expected I/O error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
  }
}

}
