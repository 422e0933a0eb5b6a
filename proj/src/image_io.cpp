#include "glance/image_io.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "glance/error.hpp"

namespace glance {

namespace {

class PgmCursor {
public:
  explicit PgmCursor(std::string_view data) : data_(data) {}

  void skip_space_and_comments()
  {
    while (pos_ < data_.size()) {
      const char ch = data_[pos_];
      if (ch == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n' && data_[pos_] != '\r') {
          ++pos_;
        }
      } else if (std::isspace(static_cast<unsigned char>(ch)) != 0) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  // Returns false at end of input; throws on a non-numeric token.
  auto next_number(std::uint64_t &value, ErrorCode on_garbage) -> bool
  {
    skip_space_and_comments();
    if (pos_ >= data_.size()) {
      return false;
    }
    const char *first = data_.data() + pos_;
    const char *last = data_.data() + data_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || (ptr < last && std::isspace(static_cast<unsigned char>(*ptr)) == 0 && *ptr != '#')) {
      throw Error(on_garbage, "expected an unsigned integer at byte " + std::to_string(pos_));
    }
    pos_ += static_cast<std::size_t>(ptr - first);
    return true;
  }

  [[nodiscard]] auto position() const noexcept -> std::size_t { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }

private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

auto rescale(std::uint64_t sample, std::uint64_t maxval) -> std::uint8_t
{
  if (maxval == 255) {
    return static_cast<std::uint8_t>(sample);
  }
  // round(sample * 255 / maxval), halves away from zero; all terms non-negative
  return static_cast<std::uint8_t>((sample * 255 * 2 + maxval) / (2 * maxval));
}

auto header_number(PgmCursor &cursor, const char *what) -> std::uint64_t
{
  std::uint64_t value = 0;
  if (!cursor.next_number(value, ErrorCode::MalformedHeader)) {
    throw Error(ErrorCode::MalformedHeader, std::string("missing ") + what);
  }
  return value;
}

} // namespace

auto load_pgm(std::span<const std::byte> bytes) -> GrayImage
{
  return load_pgm(std::string_view(reinterpret_cast<const char *>(bytes.data()), bytes.size()));
}

auto load_pgm(std::string_view data) -> GrayImage
{
  if (data.size() < 2 || data[0] != 'P') {
    throw Error(ErrorCode::UnsupportedMagic, "not a netpbm stream");
  }
  const char kind = data[1];
  if (kind != '2' && kind != '5') {
    throw Error(ErrorCode::UnsupportedMagic, std::string("magic P") + kind + " is not a graymap");
  }
  if (data.size() > 2 && std::isspace(static_cast<unsigned char>(data[2])) == 0 && data[2] != '#') {
    throw Error(ErrorCode::MalformedHeader, "magic number must be followed by whitespace");
  }

  PgmCursor cursor(data.substr(2));
  const auto width = header_number(cursor, "width");
  const auto height = header_number(cursor, "height");
  const auto maxval = header_number(cursor, "maxval");
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::MalformedHeader, "width and height must be positive");
  }
  if (maxval < 1 || maxval > 65535) {
    throw Error(ErrorCode::MalformedHeader, "maxval must lie in [1, 65535]");
  }
  if (width > std::numeric_limits<std::uint32_t>::max() / height) {
    throw Error(ErrorCode::MalformedHeader, "image dimensions overflow");
  }

  const std::size_t count = width * height;
  std::vector<std::uint8_t> pixels;
  pixels.reserve(count);

  auto accept = [&](std::uint64_t sample) {
    if (sample > maxval) {
      throw Error(ErrorCode::ValueOutOfRange, "sample " + std::to_string(sample) + " exceeds maxval");
    }
    pixels.push_back(rescale(sample, maxval));
  };

  if (kind == '2') {
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t sample = 0;
      if (!cursor.next_number(sample, ErrorCode::MalformedValue)) {
        throw Error(ErrorCode::TruncatedData,
                    "expected " + std::to_string(count) + " samples, got " + std::to_string(i));
      }
      accept(sample);
    }
  } else {
    // exactly one whitespace byte separates maxval from the raster
    const std::size_t raster = 2 + cursor.position() + 1;
    if (raster > data.size()) {
      throw Error(ErrorCode::TruncatedData, "raster missing");
    }
    const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
    if (data.size() - raster < count * bytes_per_sample) {
      throw Error(ErrorCode::TruncatedData, "expected " + std::to_string(count * bytes_per_sample) +
                                                " raster bytes, got " + std::to_string(data.size() - raster));
    }
    const auto *p = reinterpret_cast<const unsigned char *>(data.data() + raster);
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t sample = bytes_per_sample == 2 ? (std::uint64_t{p[2 * i]} << 8) | p[2 * i + 1] : p[i];
      accept(sample);
    }
  }
  return GrayImage(height, width, std::move(pixels));
}

auto to_pgm(const GrayImage &img) -> std::string
{
  std::string out = "P5\n" + std::to_string(img.cols()) + " " + std::to_string(img.rows()) + "\n255\n";
  const auto px = img.pixels();
  out.append(reinterpret_cast<const char *>(px.data()), px.size());
  return out;
}

auto load_grid_csv(std::string_view text) -> GrayImage
{
  std::vector<std::uint8_t> pixels;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line.empty()) {
      if (start >= text.size()) {
        break; // trailing newline
      }
      throw Error(ErrorCode::RaggedRows, "blank line at row " + std::to_string(rows + 1));
    }

    std::size_t fields = 0;
    std::size_t field_start = 0;
    while (true) {
      std::size_t comma = line.find(',', field_start);
      std::string_view field =
          line.substr(field_start, comma == std::string_view::npos ? std::string_view::npos : comma - field_start);
      while (!field.empty() && field.front() == ' ') {
        field.remove_prefix(1);
      }
      while (!field.empty() && field.back() == ' ') {
        field.remove_suffix(1);
      }
      int value = 0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec == std::errc::invalid_argument || ptr != field.data() + field.size()) {
        throw Error(ErrorCode::MalformedValue, "row " + std::to_string(rows + 1) + ": '" + std::string(field) +
                                                   "' is not an integer");
      }
      if (ec == std::errc::result_out_of_range || value < 0 || value > 255) {
        throw Error(ErrorCode::ValueOutOfRange,
                    "row " + std::to_string(rows + 1) + ": " + std::string(field) + " outside [0, 255]");
      }
      pixels.push_back(static_cast<std::uint8_t>(value));
      ++fields;
      if (comma == std::string_view::npos) {
        break;
      }
      field_start = comma + 1;
    }

    if (rows == 0) {
      cols = fields;
    } else if (fields != cols) {
      throw Error(ErrorCode::RaggedRows, "row " + std::to_string(rows + 1) + " has " + std::to_string(fields) +
                                             " fields, expected " + std::to_string(cols));
    }
    ++rows;
  }

  if (rows == 0) {
    throw Error(ErrorCode::EmptyInput, "grid CSV has no rows");
  }
  return GrayImage(rows, cols, std::move(pixels));
}

auto to_grid_csv(const GrayImage &img) -> std::string
{
  std::string out;
  out.reserve(img.size() * 4);
  for (std::size_t r = 0; r < img.rows(); ++r) {
    for (std::size_t c = 0; c < img.cols(); ++c) {
      if (c != 0) {
        out.push_back(',');
      }
      out += std::to_string(img.at(r, c));
    }
    out.push_back('\n');
  }
  return out;
}

auto read_file(const std::filesystem::path &path) -> std::string
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorCode::IoError, "failed reading " + path.string());
  }
  return std::move(buf).str();
}

void write_file(const std::filesystem::path &path, std::string_view contents)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot create " + path.string());
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) {
    throw Error(ErrorCode::IoError, "failed writing " + path.string());
  }
}

auto load_image(const std::filesystem::path &path) -> GrayImage
{
  if (std::filesystem::is_directory(path)) {
    throw Error(ErrorCode::IoError, path.string() + " is a directory");
  }
  const std::string data = read_file(path);
  if (!data.empty() && data.front() == 'P') {
    return load_pgm(std::string_view(data));
  }
  return load_grid_csv(data);
}

} // namespace glance
