#include "chaincatch/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "chaincatch/error.hpp"

namespace chaincatch {

namespace {

// Higher layers overwrite lower ones.
enum Layer : unsigned char {
    Empty,
    SlopeRising,
    SlopeFalling,
    Ring,
    Link,
    EscapeeBody,
    CatcherBody,
    MemberBody,
    EscapeeCentre,
    CatcherCentre,
    MemberCentre,
    Mark,
};

constexpr char kGlyph[] = {'.', '/', '\\', '+', '=', 'e', 'k', 'm', 'E', 'K', 'M', '!'};

constexpr unsigned char kColour[][3] = {
    {250, 250, 250}, {150, 150, 150}, {150, 150, 150}, {120, 200, 120}, {90, 90, 90},  {120, 160, 230},
    {230, 140, 120}, {240, 190, 90},  {30, 70, 200},   {200, 40, 30},   {200, 120, 0}, {0, 0, 0}};

class Canvas {
public:
    Canvas(int w, int h) : w_(w), h_(h), cells_(std::size_t(w) * h, Empty) {}

    void paint(int x, int y, Layer layer) {
        if (x < 0 || y < 0 || x >= w_ || y >= h_) return;
        auto& c = cells_[std::size_t(y) * w_ + x];
        if (layer > c) c = layer;
    }
    Layer at(int x, int y) const { return static_cast<Layer>(cells_[std::size_t(y) * w_ + x]); }
    int width() const { return w_; }
    int height() const { return h_; }

private:
    int w_, h_;
    std::vector<unsigned char> cells_;
};

void draw_segment(Canvas& canvas, Cell a, Cell b) {
    const int steps = std::max(std::abs(b.x - a.x), std::abs(b.y - a.y));
    for (int i = 0; i <= steps; ++i) {
        const double t = steps == 0 ? 0.0 : double(i) / steps;
        canvas.paint(int(std::lround(a.x + t * (b.x - a.x))), int(std::lround(a.y + t * (b.y - a.y))), Link);
    }
}

void draw_disc(Canvas& canvas, Cell centre, double radius, Layer body, Layer core) {
    const int r = int(std::ceil(radius));
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
            if (std::hypot(dx, dy) <= radius) canvas.paint(centre.x + dx, centre.y + dy, body);
    canvas.paint(centre.x, centre.y, core);
}

Canvas draw(const GameTrace& trace, const SlopeMap& slopes, const CycleRecord& record, bool k_circle,
            bool mark_catches) {
    const auto& cfg = trace.config;
    const Arena& arena = cfg.arena;
    Canvas canvas(arena.width, arena.height);

    for (const auto& group : slopes.groups()) {
        const bool rising = group.corner == Corner::NW || group.corner == Corner::SE;
        for (std::size_t i = 0; i < group.cells.size(); i += 2)
            canvas.paint(group.cells[i].x, group.cells[i].y, rising ? SlopeRising : SlopeFalling);
    }

    const Cell catcher = record.positions[cfg.catcher_id];
    if (k_circle) {
        const double k = cfg.params.k;
        for (int y = 0; y < arena.height; ++y)
            for (int x = 0; x < arena.width; ++x)
                if (std::abs(euclidean_distance(Cell{x, y}, catcher) - k) < 0.5) canvas.paint(x, y, Ring);
    }

    for (std::size_t i = 0; i + 1 < record.chain.size(); ++i)
        draw_segment(canvas, record.positions[record.chain[i]], record.positions[record.chain[i + 1]]);

    const double radius = arena.agent_diameter / 2.0;
    for (std::size_t id = 0; id < record.positions.size(); ++id) {
        const bool member = std::find(record.chain.begin(), record.chain.end(), int(id)) != record.chain.end();
        const bool is_catcher = int(id) == cfg.catcher_id && !member;
        const Layer body = member ? MemberBody : is_catcher ? CatcherBody : EscapeeBody;
        const Layer core = member ? MemberCentre : is_catcher ? CatcherCentre : EscapeeCentre;
        draw_disc(canvas, record.positions[id], radius, body, core);
    }

    if (mark_catches)
        for (const auto& e : record.events)
            if (const auto* c = std::get_if<CatchEvent>(&e)) {
                const Cell a = record.positions[c->catcher], b = record.positions[c->caught];
                canvas.paint(a.x, a.y, Mark);
                canvas.paint(b.x, b.y, Mark);
            }
    return canvas;
}

std::string describe_events(const CycleRecord& r) {
    std::string out;
    for (const auto& e : r.events) {
        if (!out.empty()) out += ' ';
        if (const auto* c = std::get_if<CatchEvent>(&e))
            out += "catch " + std::to_string(c->catcher) + "->" + std::to_string(c->caught);
        else if (const auto* j = std::get_if<CatchRejectedEvent>(&e))
            out += "rejected " + std::to_string(j->catcher) + "->" + std::to_string(j->caught);
        else if (const auto* b = std::get_if<ChainBrokenEvent>(&e))
            out += b->ends_meet && b->links.empty() ? "broken ends" : "broken " + std::to_string(b->links.size()) + " link(s)";
        else
            out += std::get<GameOverEvent>(e).kind == OutcomeKind::Complete ? "over complete" : "over timeout";
    }
    return out.empty() ? "-" : out;
}

std::string as_text(const Canvas& canvas) {
    std::string out;
    out.reserve(std::size_t(canvas.width() + 1) * canvas.height());
    for (int y = 0; y < canvas.height(); ++y) {
        for (int x = 0; x < canvas.width(); ++x) out += kGlyph[canvas.at(x, y)];
        out += '\n';
    }
    return out;
}

std::string as_ppm(const Canvas& canvas, int scale, const std::string& comments) {
    std::string out = "P6\n";
    std::size_t start = 0;
    while (start < comments.size()) {
        auto end = comments.find('\n', start);
        if (end == std::string::npos) end = comments.size();
        out += "# " + comments.substr(start, end - start) + "\n";
        start = end + 1;
    }
    out += std::to_string(canvas.width() * scale) + " " + std::to_string(canvas.height() * scale) + "\n255\n";
    for (int y = 0; y < canvas.height(); ++y)
        for (int sy = 0; sy < scale; ++sy)
            for (int x = 0; x < canvas.width(); ++x)
                for (int sx = 0; sx < scale; ++sx) {
                    const auto* rgb = kColour[canvas.at(x, y)];
                    out.append(reinterpret_cast<const char*>(rgb), 3);
                }
    return out;
}

std::string frame_name(int cycle, FrameFormat format) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%06d.%s", cycle, format == FrameFormat::Text ? "txt" : "ppm");
    return buf;
}

} // namespace

std::vector<Frame> render_trace(const GameTrace& trace, const RenderOptions& options, const std::string& header) {
    if (options.every < 1) throw InvariantError("--every must be >= 1");
    if (options.scale < 1) throw InvariantError("scale must be >= 1");
    if (trace.records.empty()) throw InvariantError("trace has no records to render");
    const SlopeMap slopes(trace.config.arena);
    std::vector<Frame> frames;

    for (const auto& r : trace.records) {
        if (r.cycle % options.every != 0) continue;
        const Canvas canvas = draw(trace, slopes, r, options.k_circle, true);
        const std::string info = "cycle " + std::to_string(r.cycle) + " chain " + std::to_string(r.chain.size()) +
                                 "/" + std::to_string(r.positions.size()) + " events: " + describe_events(r);
        if (options.format == FrameFormat::Text)
            frames.push_back({frame_name(r.cycle, options.format), info + "\n" + as_text(canvas)});
        else
            frames.push_back({frame_name(r.cycle, options.format), as_ppm(canvas, options.scale, info)});
    }

    const auto& last = trace.records.back();
    const Canvas canvas = draw(trace, slopes, last, options.k_circle, false);
    std::string summary = header;
    if (!summary.empty() && summary.back() != '\n') summary += '\n';
    summary += "summary cycles " + std::to_string(last.cycle) + " outcome " +
               (trace.outcome.kind == OutcomeKind::Complete ? "complete T_c=" : "timeout after ") +
               std::to_string(trace.outcome.cycles) + "\n";
    std::string catches;
    for (const auto& r : trace.records)
        for (const auto& e : r.events)
            if (const auto* c = std::get_if<CatchEvent>(&e))
                catches += " " + std::to_string(r.cycle) + ":" + std::to_string(c->catcher) + "->" +
                           std::to_string(c->caught);
    summary += "catches" + (catches.empty() ? std::string(" -") : catches) + "\n";
    if (options.format == FrameFormat::Text)
        frames.push_back({"summary.txt", summary + as_text(canvas)});
    else
        frames.push_back({"summary.ppm", as_ppm(canvas, options.scale, summary)});
    return frames;
}

} // namespace chaincatch
