#include "cubetti/image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cubetti {

namespace {

constexpr std::size_t kMaxPixels = std::size_t{1} << 26;

[[noreturn]] void fail(const std::string& path, std::size_t offset, const std::string& msg) {
  throw std::runtime_error(path + ": byte " + std::to_string(offset) + ": " + msg);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Cursor over the raw file bytes; all errors carry the current byte offset.
struct Reader {
  const std::string& path;
  const std::string& buf;
  std::size_t pos = 0;

  bool eof() const { return pos >= buf.size(); }

  void skip_space_and_comments() {
    while (pos < buf.size()) {
      char c = buf[pos];
      if (c == '#') {
        while (pos < buf.size() && buf[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  int read_int(const char* what) {
    skip_space_and_comments();
    if (eof()) fail(path, pos, std::string("malformed header: missing ") + what);
    std::size_t start = pos;
    long long v = 0;
    bool any = false;
    while (pos < buf.size() && std::isdigit(static_cast<unsigned char>(buf[pos]))) {
      v = v * 10 + (buf[pos] - '0');
      if (v > 1'000'000'000LL) fail(path, start, std::string(what) + " out of range");
      ++pos;
      any = true;
    }
    if (!any) fail(path, pos, std::string("malformed header: expected integer ") + what);
    return static_cast<int>(v);
  }
};

void check_dimensions(const std::string& path, std::size_t offset, int rows, int cols) {
  if (rows <= 0 || cols <= 0) fail(path, offset, "zero-sized image");
  if (static_cast<std::size_t>(rows) * cols > kMaxPixels) fail(path, offset, "image too large");
}

RgbImage load_netpbm(const std::string& path, ImageFormat format) {
  std::string buf = slurp(path);
  Reader rd{path, buf};

  const char* want = nullptr;
  switch (format) {
    case ImageFormat::PgmAscii: want = "P2"; break;
    case ImageFormat::PpmAscii: want = "P3"; break;
    case ImageFormat::PgmBinary: want = "P5"; break;
    case ImageFormat::PpmBinary: want = "P6"; break;
    default: throw std::logic_error("load_netpbm: not a netpbm format");
  }
  rd.skip_space_and_comments();
  if (buf.size() < rd.pos + 2 || buf[rd.pos] != want[0] || buf[rd.pos + 1] != want[1])
    fail(path, rd.pos, std::string("malformed header: expected magic ") + want);
  rd.pos += 2;

  std::size_t dim_offset = rd.pos;
  int cols = rd.read_int("width");
  int rows = rd.read_int("height");
  check_dimensions(path, dim_offset, rows, cols);
  std::size_t maxval_offset = rd.pos;
  int maxval = rd.read_int("maxval");
  if (maxval != 255) fail(path, maxval_offset, "unsupported maxval " + std::to_string(maxval) + " (must be 255)");

  bool color = (format == ImageFormat::PpmAscii || format == ImageFormat::PpmBinary);
  std::size_t samples = (color ? 3 : 1) * static_cast<std::size_t>(rows) * cols;

  RgbImage img = make_rgb_image(rows, cols);

  if (format == ImageFormat::PgmAscii || format == ImageFormat::PpmAscii) {
    std::vector<int> raw(samples);
    for (std::size_t s = 0; s < samples; ++s) {
      rd.skip_space_and_comments();
      if (rd.eof()) fail(path, rd.pos, "truncated pixel data");
      std::size_t at = rd.pos;
      int v = rd.read_int("sample");
      if (v > 255) fail(path, at, "sample out of range");
      raw[s] = v;
    }
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
      if (color) {
        img.data[3 * p] = static_cast<std::uint8_t>(raw[3 * p]);
        img.data[3 * p + 1] = static_cast<std::uint8_t>(raw[3 * p + 1]);
        img.data[3 * p + 2] = static_cast<std::uint8_t>(raw[3 * p + 2]);
      } else {
        std::uint8_t v = static_cast<std::uint8_t>(raw[p]);
        img.data[3 * p] = img.data[3 * p + 1] = img.data[3 * p + 2] = v;
      }
    }
  } else {
    if (rd.eof() || !std::isspace(static_cast<unsigned char>(buf[rd.pos])))
      fail(path, rd.pos, "malformed header: expected whitespace before raster");
    ++rd.pos;  // exactly one whitespace byte separates maxval from the raster
    if (buf.size() - rd.pos < samples) fail(path, buf.size(), "truncated pixel data");
    const std::uint8_t* raw = reinterpret_cast<const std::uint8_t*>(buf.data() + rd.pos);
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
      if (color) {
        img.data[3 * p] = raw[3 * p];
        img.data[3 * p + 1] = raw[3 * p + 1];
        img.data[3 * p + 2] = raw[3 * p + 2];
      } else {
        img.data[3 * p] = img.data[3 * p + 1] = img.data[3 * p + 2] = raw[p];
      }
    }
  }
  return img;
}

RgbImage load_csv(const std::string& path) {
  std::string buf = slurp(path);
  std::vector<std::vector<int>> grid;
  std::size_t pos = 0;
  std::size_t line_start = 0;
  while (pos <= buf.size()) {
    if (pos == buf.size() || buf[pos] == '\n') {
      std::string line = buf.substr(line_start, pos - line_start);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      bool blank = line.find_first_not_of(" \t") == std::string::npos;
      if (!blank) {
        std::vector<int> row;
        std::size_t cell_start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
          if (i == line.size() || line[i] == ',') {
            std::string cell = line.substr(cell_start, i - cell_start);
            std::size_t off = line_start + cell_start;
            try {
              std::size_t used = 0;
              int v = std::stoi(cell, &used);
              while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
              if (used != cell.size()) fail(path, off, "malformed cell '" + cell + "'");
              if (v < 0 || v > 255) fail(path, off, "sample out of range");
              row.push_back(v);
            } catch (const std::invalid_argument&) {
              fail(path, off, "malformed cell '" + cell + "'");
            } catch (const std::out_of_range&) {
              fail(path, off, "sample out of range");
            }
            cell_start = i + 1;
          }
        }
        if (!grid.empty() && row.size() != grid.front().size())
          fail(path, line_start, "ragged row: expected " + std::to_string(grid.front().size()) + " values");
        grid.push_back(std::move(row));
      }
      line_start = pos + 1;
    }
    ++pos;
  }
  if (grid.empty() || grid.front().empty()) fail(path, 0, "zero-sized image");
  int rows = static_cast<int>(grid.size());
  int cols = static_cast<int>(grid.front().size());
  check_dimensions(path, 0, rows, cols);
  RgbImage img = make_rgb_image(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      std::uint8_t v = static_cast<std::uint8_t>(grid[i][j]);
      img.set(i, j, v, v, v);
    }
  return img;
}

}  // namespace

const char* channel_name(Channel c) {
  switch (c) {
    case Channel::Red: return "red";
    case Channel::Green: return "green";
    case Channel::Blue: return "blue";
    case Channel::Gray: return "gray";
  }
  return "?";
}

Channel channel_from_name(const std::string& name) {
  if (name == "red") return Channel::Red;
  if (name == "green") return Channel::Green;
  if (name == "blue") return Channel::Blue;
  if (name == "gray" || name == "grey" || name == "grayscale") return Channel::Gray;
  throw std::invalid_argument("unknown channel '" + name + "' (expected red, green, blue or gray)");
}

bool RgbImage::monochrome() const {
  for (std::size_t p = 0; p < pixel_count(); ++p)
    if (data[3 * p] != data[3 * p + 1] || data[3 * p] != data[3 * p + 2]) return false;
  return true;
}

RgbImage make_rgb_image(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("image dimensions must be >= 1");
  if (static_cast<std::size_t>(rows) * cols > kMaxPixels) throw std::invalid_argument("image too large");
  RgbImage img;
  img.rows = rows;
  img.cols = cols;
  img.data.assign(3 * img.pixel_count(), 0);
  return img;
}

RgbImage load_image(const std::string& path, ImageFormat format) {
  if (format == ImageFormat::Csv) return load_csv(path);
  return load_netpbm(path, format);
}

RgbImage load_image_auto(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] == 'P') {
    switch (magic[1]) {
      case '2': return load_image(path, ImageFormat::PgmAscii);
      case '3': return load_image(path, ImageFormat::PpmAscii);
      case '5': return load_image(path, ImageFormat::PgmBinary);
      case '6': return load_image(path, ImageFormat::PpmBinary);
      default: break;
    }
  }
  auto dot = path.find_last_of('.');
  if (dot != std::string::npos) {
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == "csv") return load_image(path, ImageFormat::Csv);
  }
  throw std::runtime_error(path + ": unrecognized image format");
}

void save_image(const RgbImage& img, const std::string& path, ImageFormat format) {
  if (img.rows < 1 || img.cols < 1) throw std::invalid_argument("cannot save zero-sized image");
  bool gray_only = (format == ImageFormat::PgmAscii || format == ImageFormat::PgmBinary ||
                    format == ImageFormat::Csv);
  if (gray_only && !img.monochrome())
    throw std::invalid_argument(path + ": grayscale format cannot represent a color image");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");

  switch (format) {
    case ImageFormat::PgmAscii: {
      out << "P2\n" << img.cols << ' ' << img.rows << "\n255\n";
      for (int i = 0; i < img.rows; ++i) {
        for (int j = 0; j < img.cols; ++j) out << int(img.r(i, j)) << (j + 1 < img.cols ? ' ' : '\n');
      }
      break;
    }
    case ImageFormat::PpmAscii: {
      out << "P3\n" << img.cols << ' ' << img.rows << "\n255\n";
      for (int i = 0; i < img.rows; ++i) {
        for (int j = 0; j < img.cols; ++j) {
          out << int(img.r(i, j)) << ' ' << int(img.g(i, j)) << ' ' << int(img.b(i, j));
          out << (j + 1 < img.cols ? ' ' : '\n');
        }
      }
      break;
    }
    case ImageFormat::PgmBinary: {
      out << "P5\n" << img.cols << ' ' << img.rows << "\n255\n";
      for (std::size_t p = 0; p < img.pixel_count(); ++p)
        out.put(static_cast<char>(img.data[3 * p]));
      break;
    }
    case ImageFormat::PpmBinary: {
      out << "P6\n" << img.cols << ' ' << img.rows << "\n255\n";
      out.write(reinterpret_cast<const char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
      break;
    }
    case ImageFormat::Csv: {
      for (int i = 0; i < img.rows; ++i) {
        for (int j = 0; j < img.cols; ++j) out << int(img.r(i, j)) << (j + 1 < img.cols ? ',' : '\n');
      }
      break;
    }
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

ChannelMatrix extract_channel(const RgbImage& img, Channel channel) {
  ChannelMatrix ch;
  ch.rows = img.rows;
  ch.cols = img.cols;
  ch.channel = channel;
  ch.values.resize(img.pixel_count());
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    int r = img.data[3 * p], g = img.data[3 * p + 1], b = img.data[3 * p + 2];
    switch (channel) {
      case Channel::Red: ch.values[p] = kScale * r; break;
      case Channel::Green: ch.values[p] = kScale * g; break;
      case Channel::Blue: ch.values[p] = kScale * b; break;
      case Channel::Gray: ch.values[p] = r + g + b; break;
    }
  }
  return ch;
}

}  // namespace cubetti
