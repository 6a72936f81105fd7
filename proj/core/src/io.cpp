#include "cohercause/io.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "cohercause/error.hpp"

namespace cohercause {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

double parse_real(const std::string& field, const char* column, std::size_t line) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw ParseError(std::string("column ") + column + ": '" + field + "' is not a number", line);
  }
  return v;
}

std::size_t column_index(const std::vector<std::string>& header, const char* name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ParseError(std::string("header has no '") + name + "' column", 1);
}

}  // namespace

SequencePair read_sequence_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError("empty input; expected a header row", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_fields(line);
  const std::size_t it = column_index(header, "t");
  const std::size_t ix = column_index(header, "x");
  const std::size_t iy = column_index(header, "y");

  SequencePair out;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    parse_real(fields[it], "t", line_no);
    out.x.push_back(parse_real(fields[ix], "x", line_no));
    out.y.push_back(parse_real(fields[iy], "y", line_no));
  }
  if (out.x.empty()) throw ParseError("no data rows after the header", line_no);
  return out;
}

SequencePair read_sequence_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return read_sequence_csv(in);
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string sequence_csv(const SequencePair& data) {
  if (data.x.size() != data.y.size()) throw ShapeError("x and y sequences differ in length");
  std::string out = "t,x,y\n";
  for (std::size_t n = 0; n < data.x.size(); ++n) {
    out += std::to_string(n) + ',' + format_real(data.x[n]) + ',' + format_real(data.y[n]) + '\n';
  }
  return out;
}

std::string coherence_map_csv(const CoherenceMap& map) {
  std::string out = "s,t,rho2\n";
  for (int t = map.t_range.first; t <= map.t_range.last; ++t) {
    for (int s = map.s_range.first; s <= map.s_range.last; ++s) {
      out += std::to_string(s) + ',' + std::to_string(t) + ',' + format_real(map.at(s, t)) + '\n';
    }
  }
  return out;
}

std::string power_curve_csv(const std::vector<PowerPoint>& curve) {
  std::string out = "ma_order,power,standard_error,rejections,replications,threshold,alpha,T,M\n";
  for (const auto& p : curve) {
    out += std::to_string(p.ma_order) + ',' + format_real(p.rate) + ',' +
           format_real(p.standard_error) + ',' + std::to_string(p.rejections) + ',' +
           std::to_string(p.replications) + ',' + format_real(p.threshold) + ',' +
           format_real(p.alpha) + ',' + std::to_string(p.T) + ',' + std::to_string(p.M) + '\n';
  }
  return out;
}

std::string roc_curve_csv(const std::vector<ROCPoint>& curve) {
  std::string out = "nominal_size,size,power,power_se\n";
  for (const auto& p : curve) {
    out += format_real(p.nominal_size) + ',' + format_real(p.size) + ',' + format_real(p.power) +
           ',' + format_real(p.power_se) + '\n';
  }
  return out;
}

Json to_json(const TestOutcome& outcome) {
  Json j;
  j["statistic"] = outcome.statistic;
  j["threshold"] = outcome.threshold;
  j["p_value"] = outcome.p_value;
  j["alpha"] = outcome.alpha;
  j["method"] = to_string(outcome.method);
  j["reject_null"] = outcome.reject_null;
  j["p"] = outcome.dims.p;
  j["q"] = outcome.dims.q;
  j["r"] = outcome.dims.r;
  j["M"] = outcome.M;
  j["seed"] = outcome.seed;
  return j;
}

Json to_json(const ReplicationConfig& config) {
  Json j;
  j["a"] = config.model.a;
  j["b"] = config.model.b;
  j["F"] = config.model.F;
  j["c"] = config.model.c();
  j["f1"] = config.model.f1;
  j["f2"] = config.model.f2;
  j["ma_order"] = config.model.ma_order;
  j["replications"] = config.replications;
  j["M"] = config.M;
  j["T"] = config.T;
  j["window_mode"] = to_string(config.window_mode);
  j["centering"] = config.centering == Centering::subtract_mean ? "subtract-mean" : "none";
  j["seed"] = config.seed;
  return j;
}

Json to_json(const SizeEstimate& size) {
  Json j;
  j["alpha"] = size.alpha;
  j["window_mode"] = to_string(size.window_mode);
  j["size"] = size.rate;
  j["standard_error"] = size.standard_error;
  j["rejections"] = size.rejections;
  j["replications"] = size.replications;
  j["threshold"] = size.threshold;
  return j;
}

std::string to_string(WindowMode mode) {
  return mode == WindowMode::consecutive ? "consecutive" : "independent";
}

WindowMode parse_window_mode(const std::string& name) {
  if (name == "consecutive") return WindowMode::consecutive;
  if (name == "independent") return WindowMode::independent;
  throw InvalidArgument("unknown window mode '" + name + "' (expected consecutive or independent)");
}

std::string to_string(Conditioning conditioning) {
  return conditioning == Conditioning::past_of_x ? "past-of-x" : "past-of-y";
}

Conditioning parse_conditioning(const std::string& name) {
  if (name == "past-of-x") return Conditioning::past_of_x;
  if (name == "past-of-y") return Conditioning::past_of_y;
  throw InvalidArgument("unknown conditioning '" + name + "' (expected past-of-x or past-of-y)");
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const auto tag = std::hash<std::thread::id>{}(std::this_thread::get_id());
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(tag);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot move output into place at '" + path.string() + "'");
  }
}

}  // namespace cohercause
