#pragma once

// Two-channel pulse programs: timed x/y-plane rotations and free J-coupling
// delays. Delays are symbolic in units of 1/J; seconds enter only in the
// simulator once a machine J is supplied.
//
// Text format, one line per channel ("N: " prefix, events separated by '-'):
//   1: -X -(1/2J)-Xm-Ym-
//   2: -Y -(1/2J)-X -   -
// Vertically aligned tokens are simultaneous. Token set: X, Xm, Y, Ym
// (pi/2 pulses along +-x/+-y), Pi(45) (pi pulse along (1,1,0)), P(f,p)
// (flip f and phase p in degrees), and (k/2J), (k/4J), (v/J) delays.
//
// A pulse event with both channel slots filled and identical payloads is a
// single "unified" RF event and counts as one pulse; a pair of distinct
// aligned pulses counts as two.

#include "optpulse/qmat.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace optpulse {

struct Pulse {
    double flip = 0.0;   // radians, >= 0 after normalization
    double phase = 0.0;  // radians in [0, 2*pi)

    bool operator==(const Pulse&) const = default;
};

inline Pulse normalized_pulse(double flip, double phase) {
    if (flip < 0) {
        flip = -flip;
        phase += pi;
    }
    phase = std::fmod(phase, 2 * pi);
    if (phase < 0) phase += 2 * pi;
    return Pulse{flip, phase};
}

// Ideal (zero-width) rotation of a pulse: e^{i flip/2 (cos sx + sin sy)}.
inline Unitary2 pulse_unitary(const Pulse& p) {
    return exp_su2(0.5 * p.flip * std::cos(p.phase), 0.5 * p.flip * std::sin(p.phase), 0.0);
}

struct PulseEvent {
    enum class Kind { pulse, delay };

    Kind kind = Kind::delay;
    std::optional<Pulse> ch1, ch2;
    bool unified = false;   // both channels driven by one RF event (ch1 == ch2)
    double duration = 0.0;  // delay length, units of 1/J

    bool operator==(const PulseEvent&) const = default;

    static PulseEvent delay(double dur) {
        if (!(dur > 0)) throw std::invalid_argument("delay duration must be positive");
        PulseEvent e;
        e.kind = Kind::delay;
        e.duration = dur;
        return e;
    }
    static PulseEvent on1(Pulse p) {
        PulseEvent e;
        e.kind = Kind::pulse;
        e.ch1 = p;
        return e;
    }
    static PulseEvent on2(Pulse p) {
        PulseEvent e;
        e.kind = Kind::pulse;
        e.ch2 = p;
        return e;
    }
    static PulseEvent pair(Pulse p1, Pulse p2) {
        PulseEvent e;
        e.kind = Kind::pulse;
        e.ch1 = p1;
        e.ch2 = p2;
        e.unified = (p1 == p2);
        return e;
    }
    static PulseEvent both(Pulse p) {
        PulseEvent e = pair(p, p);
        e.unified = true;
        return e;
    }

    int pulse_count() const {
        if (kind != Kind::pulse) return 0;
        if (unified) return 1;
        return (ch1 ? 1 : 0) + (ch2 ? 1 : 0);
    }
};

struct PulseProgram {
    std::string label;
    std::vector<PulseEvent> events;  // execution order

    int pulse_count() const {
        int n = 0;
        for (const auto& e : events) n += e.pulse_count();
        return n;
    }

    double coupling_time() const {
        double t = 0;
        for (const auto& e : events)
            if (e.kind == PulseEvent::Kind::delay) t += e.duration;
        return t;
    }

    bool operator==(const PulseProgram&) const = default;
};

// ---------------------------------------------------------------------------
// tokens

namespace pulse_text {

inline const Pulse tok_X{0.5 * pi, 0.0};
inline const Pulse tok_Xm{0.5 * pi, pi};
inline const Pulse tok_Y{0.5 * pi, 0.5 * pi};
inline const Pulse tok_Ym{0.5 * pi, 1.5 * pi};
inline const Pulse tok_Pi45{pi, 0.25 * pi};

inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // prefer short exact forms: re-print with fewer digits when lossless
    for (int prec = 1; prec < 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return std::string(buf);
    }
    return s;
}

inline std::string pulse_token(const Pulse& p) {
    if (p == tok_X) return "X";
    if (p == tok_Xm) return "Xm";
    if (p == tok_Y) return "Y";
    if (p == tok_Ym) return "Ym";
    if (p == tok_Pi45) return "Pi(45)";
    const double fdeg = p.flip * (180.0 / pi);
    const double pdeg = p.phase * (180.0 / pi);
    return "P(" + format_number(fdeg) + "," + format_number(pdeg) + ")";
}

inline std::string delay_token(double dur) {
    char buf[32];
    const double h = dur * 2.0;
    if (h == std::floor(h) && h >= 1 && h < 1e15 && h / 2.0 == dur) {
        std::snprintf(buf, sizeof buf, "(%lld/2J)", static_cast<long long>(h));
        return std::string(buf);
    }
    const double q = dur * 4.0;
    if (q == std::floor(q) && q >= 1 && q < 1e15 && q / 4.0 == dur) {
        std::snprintf(buf, sizeof buf, "(%lld/4J)", static_cast<long long>(q));
        return std::string(buf);
    }
    return "(" + format_number(dur) + "/J)";
}

struct Token {
    std::string text;
    std::size_t offset = 0;
};

struct ParseError : std::runtime_error {
    int line;
    std::size_t column;
    ParseError(int line_, std::size_t col, const std::string& what)
        : std::runtime_error("pulse text parse error at line " + std::to_string(line_) + ", column " +
                             std::to_string(col + 1) + ": " + what),
          line(line_), column(col) {}
};

inline std::vector<Token> tokenize_line(const std::string& body, int lineno) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < body.size()) {
        const char c = body[i];
        if (c == ' ' || c == '-' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        std::string text;
        if (std::isalpha(static_cast<unsigned char>(c))) {
            while (i < body.size() && std::isalpha(static_cast<unsigned char>(body[i]))) text += body[i++];
            if (i < body.size() && body[i] == '(') {
                while (i < body.size() && body[i] != ')') text += body[i++];
                if (i >= body.size()) throw ParseError(lineno, start, "unterminated '('");
                text += body[i++];
            }
        } else if (c == '(') {
            while (i < body.size() && body[i] != ')') text += body[i++];
            if (i >= body.size()) throw ParseError(lineno, start, "unterminated '('");
            text += body[i++];
        } else {
            throw ParseError(lineno, start, std::string("unexpected character '") + c + "'");
        }
        out.push_back({text, start});
    }
    return out;
}

inline bool is_delay_token(const std::string& t) {
    return !t.empty() && t.front() == '(' && t.find('J') != std::string::npos;
}

inline double parse_delay(const std::string& t, int lineno, std::size_t col) {
    // (num/4J) or (num/J)
    const std::string inner = t.substr(1, t.size() - 2);
    const std::size_t slash = inner.find('/');
    if (slash == std::string::npos) throw ParseError(lineno, col, "bad delay token " + t);
    const std::string num = inner.substr(0, slash);
    const std::string den = inner.substr(slash + 1);
    char* end = nullptr;
    const double v = std::strtod(num.c_str(), &end);
    if (end == num.c_str() || *end != '\0') throw ParseError(lineno, col, "bad delay value in " + t);
    if (den == "4J") return v / 4.0;
    if (den == "2J") return v / 2.0;
    if (den == "J") return v;
    throw ParseError(lineno, col, "bad delay denominator in " + t);
}

inline Pulse parse_pulse(const std::string& t, int lineno, std::size_t col) {
    if (t == "X") return tok_X;
    if (t == "Xm") return tok_Xm;
    if (t == "Y") return tok_Y;
    if (t == "Ym") return tok_Ym;
    if (t == "Pi(45)") return tok_Pi45;
    if (t.rfind("P(", 0) == 0 && t.back() == ')') {
        const std::string inner = t.substr(2, t.size() - 3);
        const std::size_t comma = inner.find(',');
        if (comma == std::string::npos) throw ParseError(lineno, col, "P token needs two angles: " + t);
        char* end = nullptr;
        const std::string a = inner.substr(0, comma), b = inner.substr(comma + 1);
        const double fdeg = std::strtod(a.c_str(), &end);
        if (end == a.c_str() || *end != '\0') throw ParseError(lineno, col, "bad flip in " + t);
        const double pdeg = std::strtod(b.c_str(), &end);
        if (end == b.c_str() || *end != '\0') throw ParseError(lineno, col, "bad phase in " + t);
        return normalized_pulse(fdeg * (pi / 180.0), pdeg * (pi / 180.0));
    }
    throw ParseError(lineno, col, "unknown token '" + t + "'");
}

}  // namespace pulse_text

inline std::string render(const PulseProgram& p) {
    using namespace pulse_text;
    std::vector<std::pair<std::string, std::string>> cells;
    cells.reserve(p.events.size());
    for (const auto& e : p.events) {
        if (e.kind == PulseEvent::Kind::delay) {
            const std::string t = delay_token(e.duration);
            cells.emplace_back(t, t);
        } else {
            cells.emplace_back(e.ch1 ? pulse_token(*e.ch1) : "", e.ch2 ? pulse_token(*e.ch2) : "");
        }
    }
    std::string l1 = "1: ", l2 = "2: ";
    for (const auto& [a, b] : cells) {
        const std::size_t w = std::max(a.size(), b.size());
        l1 += "-" + a + std::string(w - a.size(), ' ');
        l2 += "-" + b + std::string(w - b.size(), ' ');
    }
    l1 += "-";
    l2 += "-";
    return l1 + "\n" + l2 + "\n";
}

inline PulseProgram parse_program(const std::string& text, std::string label = "") {
    using namespace pulse_text;
    std::vector<std::string> lines;
    std::string cur;
    for (const char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);

    std::string body1, body2;
    std::size_t base1 = 0, base2 = 0;
    int seen = 0;
    for (const auto& line : lines) {
        std::size_t i = 0;
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i >= line.size()) continue;
        if ((line[i] != '1' && line[i] != '2') || i + 1 >= line.size() || line[i + 1] != ':')
            throw ParseError(seen + 1, i, "expected 'N:' channel prefix");
        const int ch = line[i] - '0';
        (ch == 1 ? body1 : body2) = line.substr(i + 2);
        (ch == 1 ? base1 : base2) = i + 2;
        ++seen;
    }
    if (seen == 0) throw ParseError(1, 0, "no channel lines found");
    (void)base1;
    (void)base2;

    auto t1 = tokenize_line(body1, 1);
    auto t2 = tokenize_line(body2, 2);

    PulseProgram prog;
    prog.label = std::move(label);
    std::size_t i = 0, j = 0;
    while (i < t1.size() || j < t2.size()) {
        const bool have1 = i < t1.size();
        const bool have2 = j < t2.size();
        if (have1 && have2 && t1[i].offset == t2[j].offset) {
            const bool d1 = is_delay_token(t1[i].text);
            const bool d2 = is_delay_token(t2[j].text);
            if (d1 != d2)
                throw ParseError(2, t2[j].offset, "pulse aligned with a delay");
            if (d1) {
                const double a = parse_delay(t1[i].text, 1, t1[i].offset);
                const double b = parse_delay(t2[j].text, 2, t2[j].offset);
                if (a != b) throw ParseError(2, t2[j].offset, "aligned delays with different durations");
                prog.events.push_back(PulseEvent::delay(a));
            } else {
                prog.events.push_back(PulseEvent::pair(parse_pulse(t1[i].text, 1, t1[i].offset),
                                                       parse_pulse(t2[j].text, 2, t2[j].offset)));
            }
            ++i;
            ++j;
        } else if (have1 && (!have2 || t1[i].offset < t2[j].offset)) {
            if (is_delay_token(t1[i].text))
                prog.events.push_back(PulseEvent::delay(parse_delay(t1[i].text, 1, t1[i].offset)));
            else
                prog.events.push_back(PulseEvent::on1(parse_pulse(t1[i].text, 1, t1[i].offset)));
            ++i;
        } else {
            if (is_delay_token(t2[j].text))
                prog.events.push_back(PulseEvent::delay(parse_delay(t2[j].text, 2, t2[j].offset)));
            else
                prog.events.push_back(PulseEvent::on2(parse_pulse(t2[j].text, 2, t2[j].offset)));
            ++j;
        }
    }
    return prog;
}

// ---------------------------------------------------------------------------
// JSON (durations in units of 1/J, angles in radians)

inline nlohmann::json to_json(const PulseEvent& e) {
    nlohmann::json j;
    if (e.kind == PulseEvent::Kind::delay) {
        j["kind"] = "delay";
        j["duration"] = e.duration;
        return j;
    }
    j["kind"] = "pulse";
    if (e.ch1 && e.ch2) {
        if (e.unified) {
            j["channel"] = "both";
            j["flip_angle"] = e.ch1->flip;
            j["phase"] = e.ch1->phase;
        } else {
            j["channel"] = "pair";
            j["ch1"] = {{"flip_angle", e.ch1->flip}, {"phase", e.ch1->phase}};
            j["ch2"] = {{"flip_angle", e.ch2->flip}, {"phase", e.ch2->phase}};
        }
    } else if (e.ch1) {
        j["channel"] = 1;
        j["flip_angle"] = e.ch1->flip;
        j["phase"] = e.ch1->phase;
    } else {
        j["channel"] = 2;
        j["flip_angle"] = e.ch2->flip;
        j["phase"] = e.ch2->phase;
    }
    return j;
}

inline PulseEvent pulse_event_from_json(const nlohmann::json& j) {
    if (j.at("kind") == "delay") return PulseEvent::delay(j.at("duration").get<double>());
    const auto& ch = j.at("channel");
    if (ch.is_number()) {
        const Pulse p{j.at("flip_angle").get<double>(), j.at("phase").get<double>()};
        return ch.get<int>() == 1 ? PulseEvent::on1(p) : PulseEvent::on2(p);
    }
    if (ch == "both")
        return PulseEvent::both(Pulse{j.at("flip_angle").get<double>(), j.at("phase").get<double>()});
    const auto& a = j.at("ch1");
    const auto& b = j.at("ch2");
    return PulseEvent::pair(Pulse{a.at("flip_angle").get<double>(), a.at("phase").get<double>()},
                            Pulse{b.at("flip_angle").get<double>(), b.at("phase").get<double>()});
}

inline nlohmann::json to_json(const PulseProgram& p) {
    nlohmann::json ev = nlohmann::json::array();
    for (const auto& e : p.events) ev.push_back(to_json(e));
    return {{"label", p.label},
            {"coupling_time", p.coupling_time()},
            {"pulse_count", p.pulse_count()},
            {"events", std::move(ev)}};
}

inline PulseProgram program_from_json(const nlohmann::json& j) {
    PulseProgram p;
    p.label = j.value("label", "");
    for (const auto& e : j.at("events")) p.events.push_back(pulse_event_from_json(e));
    return p;
}

}  // namespace optpulse
