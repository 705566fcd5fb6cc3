#include "copter_cpi/cli/json_source.hpp"

#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

namespace copter_cpi::cli {

namespace {

using json = nlohmann::json;

// Forward iterator over a buffer that counts the newlines it steps past.
class LineCountingIterator {
 public:
  using iterator_category = std::forward_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  LineCountingIterator() = default;
  LineCountingIterator(const char* p, std::size_t* line) : p_(p), line_(line) {}

  reference operator*() const { return *p_; }
  LineCountingIterator& operator++() {
    if (line_ != nullptr && *p_ == '\n') {
      ++*line_;
    }
    ++p_;
    return *this;
  }
  LineCountingIterator operator++(int) {
    LineCountingIterator old = *this;
    ++*this;
    return old;
  }
  bool operator==(const LineCountingIterator& other) const { return p_ == other.p_; }
  bool operator!=(const LineCountingIterator& other) const { return p_ != other.p_; }

 private:
  const char* p_ = nullptr;
  std::size_t* line_ = nullptr;
};

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

// Forwards every event to the DOM builder while recording where values sit.
class LineRecorder {
 public:
  LineRecorder(json& root, const std::size_t* line, std::map<std::string, std::size_t>& lines)
      : dom_(root), line_(line), lines_(lines) {}

  bool null() { return scalar() && dom_.null(); }
  bool boolean(bool v) { return scalar() && dom_.boolean(v); }
  bool number_integer(json::number_integer_t v) { return scalar() && dom_.number_integer(v); }
  bool number_unsigned(json::number_unsigned_t v) { return scalar() && dom_.number_unsigned(v); }
  bool number_float(json::number_float_t v, const json::string_t& s) { return scalar() && dom_.number_float(v, s); }
  bool string(json::string_t& v) { return scalar() && dom_.string(v); }
  bool binary(json::binary_t& v) { return scalar() && dom_.binary(v); }

  bool start_object(std::size_t n) {
    open(false);
    return dom_.start_object(n);
  }
  bool end_object() {
    close();
    return dom_.end_object();
  }
  bool start_array(std::size_t n) {
    open(true);
    return dom_.start_array(n);
  }
  bool end_array() {
    close();
    return dom_.end_array();
  }
  bool key(json::string_t& k) {
    frames_.back().key = k;
    record(pointer());
    return dom_.key(k);
  }

  template <class Exception>
  bool parse_error(std::size_t position, const std::string& token, const Exception& ex) {
    return dom_.parse_error(position, token, ex);
  }

 private:
  struct Frame {
    bool array = false;
    std::string key;
    std::size_t index = 0;
  };

  std::string pointer() const {
    std::string p;
    for (const Frame& f : frames_) {
      p += '/';
      p += f.array ? std::to_string(f.index) : escape_token(f.key);
    }
    return p;
  }

  void record(const std::string& p) { lines_.emplace(p, *line_); }

  bool scalar() {
    record(pointer());
    advance();
    return true;
  }

  void open(bool array) {
    record(pointer());
    frames_.push_back(Frame{array, {}, 0});
  }

  void close() {
    frames_.pop_back();
    advance();
  }

  void advance() {
    if (!frames_.empty() && frames_.back().array) {
      ++frames_.back().index;
    }
  }

  nlohmann::detail::json_sax_dom_parser<json> dom_;
  const std::size_t* line_;
  std::map<std::string, std::size_t>& lines_;
  std::vector<Frame> frames_;
};

}  // namespace

JsonSource JsonSource::parse(const std::string& text, std::string origin) {
  JsonSource src;
  src.origin_ = std::move(origin);
  std::size_t line = 1;
  LineRecorder recorder(src.root_, &line, src.lines_);
  try {
    json::sax_parse(LineCountingIterator(text.data(), &line), LineCountingIterator(text.data() + text.size(), &line),
                    &recorder);
  } catch (const json::exception& ex) {
    throw ConfigError(src.origin_ + ":" + std::to_string(line) + ": malformed JSON: " + ex.what());
  }
  return src;
}

JsonSource JsonSource::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(path + ": cannot open file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

std::size_t JsonSource::line_of(const std::string& pointer) const {
  std::string p = pointer;
  while (true) {
    const auto it = lines_.find(p);
    if (it != lines_.end()) {
      return it->second;
    }
    if (p.empty()) {
      return 0;
    }
    p.erase(p.rfind('/'));
  }
}

void JsonSource::fail(const std::string& pointer, const std::string& message) const {
  const std::size_t line = line_of(pointer);
  std::string where = origin_;
  if (line > 0) {
    where += ":" + std::to_string(line);
  }
  throw ConfigError(where + ": " + message + (pointer.empty() ? "" : " (at " + pointer + ")"));
}

}  // namespace copter_cpi::cli
