#include "explore/world.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace explore {

namespace {

constexpr std::string_view kHeaderMagic = "EXPLORE-WORLD v1";

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

template <typename T>
T parse_number(std::string_view s, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("bad " + std::string(what) + " value '" + std::string(s) + "'");
  }
  return value;
}

std::string_view field_value(std::string_view token, std::string_view key) {
  if (token.size() <= key.size() + 1 || token.substr(0, key.size()) != key ||
      token[key.size()] != '=') {
    throw ParseError("expected '" + std::string(key) + "=' in header, got '" +
                     std::string(token) + "'");
  }
  return token.substr(key.size() + 1);
}

}  // namespace

Floorplan::Floorplan(std::string name, double resolution, Grid<std::uint8_t> cells)
    : name_(std::move(name)), resolution_(resolution), cells_(std::move(cells)) {
  if (!(resolution_ > 0.0)) throw ValidationError("resolution must be positive");
  if (cells_.rows() == 0 || cells_.cols() == 0) throw ValidationError("empty grid");
  const int w = width(), h = height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (cells_(y, x) > 2) throw ValidationError("unknown cell kind");
      const bool border = x == 0 || y == 0 || x == w - 1 || y == h - 1;
      if (border && cells_(y, x) != static_cast<std::uint8_t>(CellKind::Wall)) {
        throw ValidationError("open boundary at (" + std::to_string(x) + ", " +
                              std::to_string(y) + ")");
      }
    }
  }
  if (count(CellKind::Free) == 0) throw ValidationError("no free cell");

  GridCell seed{-1, -1};
  for (int y = 0; y < h && seed.x < 0; ++y)
    for (int x = 0; x < w; ++x)
      if (passable({x, y})) { seed = {x, y}; break; }
  const auto mask = reachable_mask(*this, seed);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (passable({x, y}) && !mask(y, x))
        throw ValidationError("disconnected free space at (" + std::to_string(x) + ", " +
                              std::to_string(y) + ")");
}

std::size_t Floorplan::count(CellKind k) const {
  return static_cast<std::size_t>((cells_ == static_cast<std::uint8_t>(k)).count());
}

Floorplan parse_floorplan(std::string_view text, std::string name) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (lines.empty()) throw ParseError("missing header");

  std::vector<std::string_view> tokens;
  {
    std::string_view header = lines.front();
    std::size_t p = 0;
    while (p < header.size()) {
      const std::size_t sp = header.find(' ', p);
      const std::size_t e = sp == std::string_view::npos ? header.size() : sp;
      if (e > p) tokens.push_back(header.substr(p, e - p));
      p = e + 1;
    }
  }
  if (tokens.size() != 5 || tokens[0] != "EXPLORE-WORLD" || tokens[1] != "v1") {
    throw ParseError("missing header '" + std::string(kHeaderMagic) + " ...'");
  }
  const double resolution = parse_number<double>(field_value(tokens[2], "resolution"), "resolution");
  const int width = parse_number<int>(field_value(tokens[3], "width"), "width");
  const int height = parse_number<int>(field_value(tokens[4], "height"), "height");
  if (width <= 0 || height <= 0) throw ParseError("non-positive dimensions");
  if (static_cast<int>(lines.size()) - 1 < height) throw ParseError("too few rows");
  for (std::size_t i = static_cast<std::size_t>(height) + 1; i < lines.size(); ++i) {
    if (!lines[i].empty()) throw ParseError("trailing content after grid");
  }

  Grid<std::uint8_t> cells(height, width);
  for (int y = 0; y < height; ++y) {
    const std::string_view row = lines[static_cast<std::size_t>(y) + 1];
    if (static_cast<int>(row.size()) != width) {
      throw ParseError("ragged row " + std::to_string(y) + ": expected " +
                       std::to_string(width) + " characters, got " + std::to_string(row.size()));
    }
    for (int x = 0; x < width; ++x) {
      switch (row[static_cast<std::size_t>(x)]) {
        case '#': cells(y, x) = static_cast<std::uint8_t>(CellKind::Wall); break;
        case '.': cells(y, x) = static_cast<std::uint8_t>(CellKind::Free); break;
        case 'D': cells(y, x) = static_cast<std::uint8_t>(CellKind::Door); break;
        default:
          throw ParseError("bad character '" + std::string(1, row[static_cast<std::size_t>(x)]) +
                           "' at row " + std::to_string(y) + ", col " + std::to_string(x));
      }
    }
  }
  return Floorplan(std::move(name), resolution, std::move(cells));
}

Floorplan load_floorplan(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_floorplan(ss.str(), path.stem().string());
}

std::string format_floorplan(const Floorplan& plan) {
  std::string out;
  out.reserve(static_cast<std::size_t>((plan.width() + 1) * plan.height() + 64));
  out += std::string(kHeaderMagic) + " resolution=" + format_double(plan.resolution()) +
         " width=" + std::to_string(plan.width()) + " height=" + std::to_string(plan.height()) +
         "\n";
  for (int y = 0; y < plan.height(); ++y) {
    for (int x = 0; x < plan.width(); ++x) {
      switch (plan.kind({x, y})) {
        case CellKind::Wall: out += '#'; break;
        case CellKind::Free: out += '.'; break;
        case CellKind::Door: out += 'D'; break;
      }
    }
    out += '\n';
  }
  return out;
}

void save_floorplan(const Floorplan& plan, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << format_floorplan(plan);
}

bool is_traversable(const Floorplan& plan, const WorldMode& /*mode*/, const Vec2& p) {
  if (!std::isfinite(p.x()) || !std::isfinite(p.y())) return false;
  return plan.passable(cell_of(p, plan.resolution()));
}

double traversable_area(const Floorplan& plan) {
  const double n = static_cast<double>(plan.count(CellKind::Free) + plan.count(CellKind::Door));
  return n * plan.resolution() * plan.resolution();
}

Grid<std::uint8_t> reachable_mask(const Floorplan& plan, const GridCell& seed) {
  Grid<std::uint8_t> mask = Grid<std::uint8_t>::Zero(plan.height(), plan.width());
  if (!plan.passable(seed)) return mask;
  std::vector<GridCell> stack{seed};
  mask(seed.y, seed.x) = 1;
  constexpr int dx[4] = {1, -1, 0, 0};
  constexpr int dy[4] = {0, 0, 1, -1};
  while (!stack.empty()) {
    const GridCell c = stack.back();
    stack.pop_back();
    for (int k = 0; k < 4; ++k) {
      const GridCell n{c.x + dx[k], c.y + dy[k]};
      if (plan.passable(n) && !mask(n.y, n.x)) {
        mask(n.y, n.x) = 1;
        stack.push_back(n);
      }
    }
  }
  return mask;
}

std::vector<GridCell> cells_with_clearance(const Floorplan& plan, double clearance) {
  const int r = static_cast<int>(std::ceil(clearance / plan.resolution()));
  const double limit2 = (clearance / plan.resolution()) * (clearance / plan.resolution());
  std::vector<GridCell> out;
  for (int y = 0; y < plan.height(); ++y) {
    for (int x = 0; x < plan.width(); ++x) {
      if (!plan.passable({x, y})) continue;
      bool ok = true;
      for (int dy = -r; dy <= r && ok; ++dy)
        for (int dx = -r; dx <= r; ++dx)
          if (dx * dx + dy * dy < limit2 && !plan.passable({x + dx, y + dy})) {
            ok = false;
            break;
          }
      if (ok) out.push_back({x, y});
    }
  }
  return out;
}

Pose sample_pose(const Floorplan& plan, double clearance, Rng& rng) {
  const auto candidates = cells_with_clearance(plan, clearance);
  if (candidates.empty()) throw InvalidState("no cell with the requested clearance");
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  std::uniform_int_distribution<int> heading(0, 39);
  const GridCell c = candidates[pick(rng)];
  const Vec2 p = cell_center(c, plan.resolution());
  return {p.x(), p.y(), 9.0 * heading(rng)};
}

}  // namespace explore
