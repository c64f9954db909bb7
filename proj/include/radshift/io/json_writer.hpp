#pragma once

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace radshift::io {

// Minimal JSON value with insertion-ordered object keys and all floating
// point serialized at 17 significant digits, so identical inputs produce
// byte-identical files.
class Json {
 public:
  static Json object() { return Json(Kind::object); }
  static Json array() { return Json(Kind::array); }
  static Json number(double v) {
    Json j(Kind::number);
    j.num_ = v;
    return j;
  }
  static Json integer(long long v) {
    Json j(Kind::integer);
    j.int_ = v;
    return j;
  }
  static Json boolean(bool v) {
    Json j(Kind::boolean);
    j.bool_ = v;
    return j;
  }
  static Json string(std::string v) {
    Json j(Kind::string);
    j.str_ = std::move(v);
    return j;
  }

  Json& set(const std::string& key, Json v) {
    members_.emplace_back(key, std::move(v));
    return *this;
  }
  Json& push(Json v) {
    items_.push_back(std::move(v));
    return *this;
  }

  std::string dump(int indent = 2) const {
    std::string out;
    write(out, indent, 0);
    out.push_back('\n');
    return out;
  }

 private:
  enum class Kind { object, array, number, integer, boolean, string };
  explicit Json(Kind k) : kind_(k) {}

  static std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }

  static std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out += buf;
          } else {
            out.push_back(c);
          }
      }
    }
    return out;
  }

  void write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)),
                          ' ');
    const std::string pad_close(static_cast<std::size_t>(indent * depth),
                                ' ');
    switch (kind_) {
      case Kind::number: out += format_double(num_); return;
      case Kind::integer: out += std::to_string(int_); return;
      case Kind::boolean: out += bool_ ? "true" : "false"; return;
      case Kind::string:
        out += '"';
        out += escape(str_);
        out += '"';
        return;
      case Kind::object: {
        if (members_.empty()) {
          out += "{}";
          return;
        }
        out += "{\n";
        for (std::size_t i = 0; i < members_.size(); ++i) {
          out += pad;
          out += '"';
          out += escape(members_[i].first);
          out += "\": ";
          members_[i].second.write(out, indent, depth + 1);
          if (i + 1 < members_.size()) out += ',';
          out += '\n';
        }
        out += pad_close;
        out += '}';
        return;
      }
      case Kind::array: {
        if (items_.empty()) {
          out += "[]";
          return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < items_.size(); ++i) {
          out += pad;
          items_[i].write(out, indent, depth + 1);
          if (i + 1 < items_.size()) out += ',';
          out += '\n';
        }
        out += pad_close;
        out += ']';
        return;
      }
    }
  }

  Kind kind_;
  double num_ = 0.0;
  long long int_ = 0;
  bool bool_ = false;
  std::string str_;
  std::vector<std::pair<std::string, Json>> members_;
  std::vector<Json> items_;
};

}  // namespace radshift::io
