#include "scenex/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace scenex {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (res.ec != std::errc{}) throw std::runtime_error("double formatting failed");
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t parse_uint(std::string_view s) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("not an unsigned integer: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
  return fnv1a64(read_text_file(path));
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string trace_to_csv(const SimulationTrace& trace) {
  std::string out;
  out += "# scenario_id=" + std::to_string(trace.scenario_id) + "\n";
  out += "# dt=" + format_double(trace.dt) + "\n";
  out += "# termination=" + to_string(trace.termination) + "\n";
  if (trace.collision_time) {
    out += "# collision_time=" + format_double(*trace.collision_time) + "\n";
  }
  out += "t,actor,x,y,vx,vy,heading,path_s\n";
  for (const auto& frame : trace.frames) {
    const std::string t = format_double(frame.t);
    for (const auto& st : frame.states) {
      out += t;
      out += ',';
      out += to_string(st.actor);
      out += ',';
      out += format_double(st.position.x);
      out += ',';
      out += format_double(st.position.y);
      out += ',';
      out += format_double(st.velocity.x);
      out += ',';
      out += format_double(st.velocity.y);
      out += ',';
      out += format_double(st.heading);
      out += ',';
      out += format_double(st.path_s);
      out += '\n';
    }
  }
  return out;
}

SimulationTrace trace_from_csv(const std::string& text) {
  SimulationTrace trace;
  std::istringstream in(text);
  std::string line;
  std::map<std::string, std::string> meta;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      std::size_t eq = line.find('=');
      if (eq == std::string::npos) throw std::runtime_error("bad trace metadata line: " + line);
      meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    if (!header_seen) {
      if (line != "t,actor,x,y,vx,vy,heading,path_s") {
        throw std::runtime_error("unexpected trace header: " + line);
      }
      header_seen = true;
      continue;
    }
    auto f = split_csv_line(line);
    if (f.size() != 8) throw std::runtime_error("bad trace row: " + line);
    const double t = parse_double(f[0]);
    ActorState st;
    st.actor = actor_id_from_string(f[1]);
    st.position = {parse_double(f[2]), parse_double(f[3])};
    st.velocity = {parse_double(f[4]), parse_double(f[5])};
    st.heading = parse_double(f[6]);
    st.path_s = parse_double(f[7]);
    if (trace.frames.empty() || trace.frames.back().t != t) {
      Frame frame;
      frame.t = t;
      trace.frames.push_back(std::move(frame));
    }
    trace.frames.back().states.push_back(st);
  }
  if (!header_seen) throw std::runtime_error("trace CSV has no header");
  auto require = [&](const char* key) {
    auto it = meta.find(key);
    if (it == meta.end()) throw std::runtime_error(std::string("trace CSV missing ") + key);
    return it->second;
  };
  trace.scenario_id = parse_uint(require("scenario_id"));
  trace.dt = parse_double(require("dt"));
  trace.termination = termination_from_string(require("termination"));
  if (auto it = meta.find("collision_time"); it != meta.end()) {
    trace.collision_time = parse_double(it->second);
  }
  return trace;
}

void write_trace_csv(const std::filesystem::path& path, const SimulationTrace& trace) {
  write_text_file(path, trace_to_csv(trace));
}

SimulationTrace read_trace_csv(const std::filesystem::path& path) {
  return trace_from_csv(read_text_file(path));
}

}  // namespace scenex
