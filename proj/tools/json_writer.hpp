#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

// Streaming JSON writer with fixed formatting rules so reports are
// byte-stable across runs and platforms: insertion-ordered keys, two-space
// indentation, and doubles printed with 17 significant digits (%.17g), which
// round-trips IEEE doubles exactly.
class JsonWriter {
public:
    explicit JsonWriter(std::ostream& os) : os_(os) {}

    void begin_object() {
        prepare_value();
        os_ << '{';
        stack_.push_back({false, 0});
    }
    void end_object() { close('}'); }

    void begin_array() {
        prepare_value();
        os_ << '[';
        stack_.push_back({true, 0});
    }
    void end_array() { close(']'); }

    void key(std::string_view k) {
        separate();
        write_escaped(k);
        os_ << ": ";
        pending_key_ = true;
    }

    void value(std::string_view s) {
        prepare_value();
        write_escaped(s);
    }
    void value(const char* s) { value(std::string_view(s)); }
    void value(const std::string& s) { value(std::string_view(s)); }
    void value(bool b) {
        prepare_value();
        os_ << (b ? "true" : "false");
    }
    void value(std::int64_t n) {
        prepare_value();
        os_ << n;
    }
    void value(int n) { value(static_cast<std::int64_t>(n)); }
    void value(std::uint64_t n) {
        prepare_value();
        os_ << n;
    }
    void value(double d) {
        prepare_value();
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", d);
        os_ << buf;
    }

    // Shorthands for "key": value pairs inside an object.
    template <typename T> void kv(std::string_view k, const T& v) {
        key(k);
        value(v);
    }

private:
    struct Level {
        bool array;
        int count;
    };

    void separate() {
        if (!stack_.empty()) {
            if (stack_.back().count > 0) os_ << ',';
            ++stack_.back().count;
            newline_indent();
        }
    }

    void prepare_value() {
        if (pending_key_) {
            pending_key_ = false;
            return;
        }
        separate();
    }

    void close(char c) {
        const bool had_items = stack_.back().count > 0;
        stack_.pop_back();
        if (had_items) newline_indent();
        os_ << c;
    }

    void newline_indent() {
        os_ << '\n';
        for (std::size_t i = 0; i < stack_.size(); ++i) os_ << "  ";
    }

    void write_escaped(std::string_view s) {
        os_ << '"';
        for (char c : s) {
            switch (c) {
            case '"': os_ << "\\\""; break;
            case '\\': os_ << "\\\\"; break;
            case '\n': os_ << "\\n"; break;
            case '\r': os_ << "\\r"; break;
            case '\t': os_ << "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    os_ << buf;
                } else {
                    os_ << c;
                }
            }
        }
        os_ << '"';
    }

    std::ostream& os_;
    std::vector<Level> stack_;
    bool pending_key_ = false;
};
