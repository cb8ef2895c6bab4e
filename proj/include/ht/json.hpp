#ifndef HT_JSON_HPP
#define HT_JSON_HPP

// Minimal JSON value tree with insertion-ordered objects and doubles printed
// as %.17g, so identical results serialize to identical bytes.

#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ht::json {

class Value;
using Array = std::vector<Value>;
using Object = std::vector<std::pair<std::string, Value>>;

class Value {
  public:
    Value() : v_(nullptr) {}
    Value(std::nullptr_t) : v_(nullptr) {}
    Value(bool b) : v_(b) {}
    Value(int i) : v_(static_cast<std::int64_t>(i)) {}
    Value(unsigned i) : v_(static_cast<std::int64_t>(i)) {}
    Value(long i) : v_(static_cast<std::int64_t>(i)) {}
    Value(unsigned long i) : v_(static_cast<std::int64_t>(i)) {}
    Value(long long i) : v_(static_cast<std::int64_t>(i)) {}
    Value(unsigned long long i) : v_(static_cast<std::int64_t>(i)) {}
    Value(double d) : v_(d) {}
    Value(const char* s) : v_(std::string(s)) {}
    Value(std::string s) : v_(std::move(s)) {}
    Value(Array a) : v_(std::move(a)) {}
    Value(Object o) : v_(std::move(o)) {}

    static Value object() { return Value(Object{}); }
    static Value array() { return Value(Array{}); }

    // object insertion preserves order; duplicate keys overwrite in place
    Value& set(const std::string& key, Value val) {
        auto& obj = std::get<Object>(v_);
        for (auto& kv : obj) {
            if (kv.first == key) {
                kv.second = std::move(val);
                return *this;
            }
        }
        obj.emplace_back(key, std::move(val));
        return *this;
    }

    Value& push(Value val) {
        std::get<Array>(v_).push_back(std::move(val));
        return *this;
    }

    bool is_object() const { return std::holds_alternative<Object>(v_); }
    bool is_array() const { return std::holds_alternative<Array>(v_); }

    std::string dump(int indent = 2) const {
        std::string out;
        write(out, indent, 0);
        if (indent > 0) out.push_back('\n');
        return out;
    }

    static std::string format_double(double d) {
        if (d != d) return "null";
        if (d > 1.7976931348623157e308 || d < -1.7976931348623157e308) return "null";
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", d);
        return buf;
    }

    static std::string escape(const std::string& s) {
        std::string out;
        out.reserve(s.size() + 2);
        out.push_back('"');
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\r': out += "\\r"; break;
                case '\t': out += "\\t"; break;
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
        out.push_back('"');
        return out;
    }

  private:
    std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array, Object> v_;

    void write(std::string& out, int indent, int depth) const {
        std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent) * (depth + 1), ' ') : "";
        std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent) * depth, ' ') : "";
        const char* nl = indent > 0 ? "\n" : "";
        if (std::holds_alternative<std::nullptr_t>(v_)) {
            out += "null";
        } else if (auto* b = std::get_if<bool>(&v_)) {
            out += *b ? "true" : "false";
        } else if (auto* i = std::get_if<std::int64_t>(&v_)) {
            out += std::to_string(*i);
        } else if (auto* d = std::get_if<double>(&v_)) {
            out += format_double(*d);
        } else if (auto* s = std::get_if<std::string>(&v_)) {
            out += escape(*s);
        } else if (auto* a = std::get_if<Array>(&v_)) {
            if (a->empty()) {
                out += "[]";
                return;
            }
            out += "[";
            out += nl;
            for (std::size_t i = 0; i < a->size(); ++i) {
                out += pad;
                (*a)[i].write(out, indent, depth + 1);
                if (i + 1 < a->size()) out += ",";
                out += nl;
            }
            out += close_pad;
            out += "]";
        } else if (auto* o = std::get_if<Object>(&v_)) {
            if (o->empty()) {
                out += "{}";
                return;
            }
            out += "{";
            out += nl;
            for (std::size_t i = 0; i < o->size(); ++i) {
                out += pad;
                out += escape((*o)[i].first);
                out += indent > 0 ? ": " : ":";
                (*o)[i].second.write(out, indent, depth + 1);
                if (i + 1 < o->size()) out += ",";
                out += nl;
            }
            out += close_pad;
            out += "}";
        }
    }
};

}  // namespace ht::json

#endif  // HT_JSON_HPP
