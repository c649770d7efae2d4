#include "asplund/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <set>

#include "window.hpp"

namespace asplund {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Pixels of a w x h domain whose shifted position x + shift stays inside.
struct SpanRange {
    int begin;
    int end;
};

SpanRange valid_range(int length, int shift)
{
    return {std::max(0, -shift), std::min(length, length - shift)};
}

constexpr std::array<std::pair<int, int>, 8> kNeighbours{{
    {-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1},
}};

// Small-k selection keeps a sorted buffer instead of partitioning the whole window.
constexpr std::size_t kSmallRank = 24;

template <typename Better>
double select_rank(std::span<double> samples, std::size_t k, Better better)
{
    if (k < kSmallRank) {
        std::array<double, kSmallRank> best;
        std::size_t filled = 0;
        for (double v : samples) {
            if (filled <= k) {
                std::size_t j = filled++;
                while (j > 0 && better(v, best[j - 1])) {
                    best[j] = best[j - 1];
                    --j;
                }
                best[j] = v;
            } else if (better(v, best[k])) {
                std::size_t j = k;
                while (j > 0 && better(v, best[j - 1])) {
                    best[j] = best[j - 1];
                    --j;
                }
                best[j] = v;
            }
        }
        return best[k];
    }
    std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(k), samples.end(), better);
    return samples[k];
}

double kth_largest(std::span<double> samples, std::size_t k)
{
    return select_rank(samples, k, std::greater<double>{});
}

double kth_smallest(std::span<double> samples, std::size_t k)
{
    return select_rank(samples, k, std::less<double>{});
}

template <typename Visit>
void for_each_neighbour(int width, int height, int x, int y, Visit visit)
{
    for (auto [dx, dy] : kNeighbours) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (nx >= 0 && ny >= 0 && nx < width && ny < height) {
            visit(nx, ny);
        }
    }
}

void require_no_nan(const RealArray& f, const char* op)
{
    for (double v : f.values()) {
        if (std::isnan(v)) {
            throw Error(std::string(op) + ": NaN input");
        }
    }
}

}  // namespace

ProbeFunction::ProbeFunction(std::vector<Offset> offsets, std::vector<double> values, LipScale scale)
    : offsets_(std::move(offsets)), values_(std::move(values)), scale_(scale)
{
    if (offsets_.empty()) {
        throw Error("probe support must not be empty");
    }
    if (offsets_.size() != values_.size()) {
        throw Error("probe offsets and values differ in length");
    }
    std::set<Offset> seen(offsets_.begin(), offsets_.end());
    if (seen.size() != offsets_.size()) {
        throw Error("probe offsets must be unique");
    }
    for (double v : values_) {
        if (std::isnan(v)) {
            throw Error("probe values must not be NaN");
        }
    }
}

ProbeFunction ProbeFunction::flat(std::vector<Offset> offsets, double value, LipScale scale)
{
    std::vector<double> values(offsets.size(), value);
    return ProbeFunction(std::move(offsets), std::move(values), scale);
}

bool ProbeFunction::is_flat() const
{
    return std::all_of(values_.begin(), values_.end(), [this](double v) { return v == values_.front(); });
}

ProbeFunction ProbeFunction::transformed(const std::function<double(double)>& fn) const
{
    std::vector<double> values;
    values.reserve(values_.size());
    for (double v : values_) {
        values.push_back(fn(v));
    }
    return with_values(std::move(values));
}

ProbeFunction ProbeFunction::with_values(std::vector<double> values) const
{
    ProbeFunction out(offsets_, std::move(values), scale_);
    out.name_ = name_;
    return out;
}

std::array<int, 4> ProbeFunction::extent() const
{
    std::array<int, 4> box{0, 0, 0, 0};
    for (const Offset& o : offsets_) {
        box[0] = std::min(box[0], o.dx);
        box[1] = std::min(box[1], o.dy);
        box[2] = std::max(box[2], o.dx);
        box[3] = std::max(box[3], o.dy);
    }
    return box;
}

std::vector<Offset> rect_offsets(int width, int height)
{
    if (width <= 0 || height <= 0) {
        throw Error("rectangle probe extents must be positive");
    }
    std::vector<Offset> out;
    const int x0 = -(width - 1) / 2;
    const int y0 = -(height - 1) / 2;
    for (int dy = 0; dy < height; ++dy) {
        for (int dx = 0; dx < width; ++dx) {
            out.push_back({x0 + dx, y0 + dy});
        }
    }
    return out;
}

std::vector<Offset> disk_offsets(int radius)
{
    if (radius < 0) {
        throw Error("disk radius must be non-negative");
    }
    std::vector<Offset> out;
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            if (dx * dx + dy * dy <= radius * radius) {
                out.push_back({dx, dy});
            }
        }
    }
    return out;
}

ProbeFunction reflect(const ProbeFunction& b)
{
    std::vector<Offset> offsets;
    offsets.reserve(b.size());
    for (const Offset& o : b.offsets()) {
        offsets.push_back(-o);
    }
    ProbeFunction out(std::move(offsets), std::vector<double>(b.values().begin(), b.values().end()), b.scale());
    out.set_name(b.name());
    return out;
}

RealArray dilate_add(const RealArray& f, const ProbeFunction& b)
{
    require_no_nan(f, "dilate_add");
    const int w = f.width();
    const int h = f.height();
    RealArray out(w, h, -kInf);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Offset o = b.offset(i);
        const double v = b.value(i);
        if (v == -kInf) {
            continue;
        }
        // f(x - h) is inside the domain iff (x - h) in D.
        const SpanRange xs = valid_range(w, -o.dx);
        const SpanRange ys = valid_range(h, -o.dy);
        for (int y = ys.begin; y < ys.end; ++y) {
            const double* src = f.row(y - o.dy).data() - o.dx;
            double* dst = out.row(y).data();
            if (v == kInf) {
                for (int x = xs.begin; x < xs.end; ++x) {
                    if (src[x] != -kInf) {
                        dst[x] = kInf;
                    }
                }
                continue;
            }
            for (int x = xs.begin; x < xs.end; ++x) {
                const double c = src[x] + v;
                dst[x] = dst[x] < c ? c : dst[x];
            }
        }
    }
    return out;
}

RealArray erode_add(const RealArray& f, const ProbeFunction& b)
{
    require_no_nan(f, "erode_add");
    const int w = f.width();
    const int h = f.height();
    RealArray out(w, h, kInf);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Offset o = b.offset(i);
        const double v = b.value(i);
        if (v == -kInf) {
            continue;
        }
        const SpanRange xs = valid_range(w, o.dx);
        const SpanRange ys = valid_range(h, o.dy);
        for (int y = ys.begin; y < ys.end; ++y) {
            const double* src = f.row(y + o.dy).data() + o.dx;
            double* dst = out.row(y).data();
            if (v == kInf) {
                for (int x = xs.begin; x < xs.end; ++x) {
                    if (src[x] != kInf) {
                        dst[x] = -kInf;
                    }
                }
                continue;
            }
            for (int x = xs.begin; x < xs.end; ++x) {
                const double c = src[x] - v;
                dst[x] = c < dst[x] ? c : dst[x];
            }
        }
    }
    return out;
}

RealArray dilate_mult(const RealArray& f, const ProbeFunction& b)
{
    for (double v : f.values()) {
        if (!(v >= 0.0)) {
            throw Error("dilate_mult: image values must be >= 0");
        }
    }
    for (double v : b.values()) {
        if (!(v >= 0.0)) {
            throw Error("dilate_mult: structuring values must be >= 0");
        }
    }
    const int w = f.width();
    const int h = f.height();
    RealArray out(w, h, 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Offset o = b.offset(i);
        const double v = b.value(i);
        if (v == 0.0) {
            continue;
        }
        const SpanRange xs = valid_range(w, -o.dx);
        const SpanRange ys = valid_range(h, -o.dy);
        for (int y = ys.begin; y < ys.end; ++y) {
            const double* src = f.row(y - o.dy).data() - o.dx;
            double* dst = out.row(y).data();
            for (int x = xs.begin; x < xs.end; ++x) {
                const double c = src[x] == 0.0 ? 0.0 : src[x] * v;
                dst[x] = std::max(dst[x], c);
            }
        }
    }
    return out;
}

RealArray erode_mult(const RealArray& f, const ProbeFunction& b)
{
    for (double v : f.values()) {
        if (!(v >= 0.0)) {
            throw Error("erode_mult: image values must be >= 0");
        }
    }
    for (double v : b.values()) {
        if (!(v >= 0.0)) {
            throw Error("erode_mult: structuring values must be >= 0");
        }
    }
    const int w = f.width();
    const int h = f.height();
    RealArray out(w, h, kInf);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Offset o = b.offset(i);
        const double v = b.value(i);
        if (v == 0.0) {
            continue;
        }
        const SpanRange xs = valid_range(w, o.dx);
        const SpanRange ys = valid_range(h, o.dy);
        for (int y = ys.begin; y < ys.end; ++y) {
            const double* src = f.row(y + o.dy).data() + o.dx;
            double* dst = out.row(y).data();
            for (int x = xs.begin; x < xs.end; ++x) {
                const double c = src[x] == kInf ? kInf : src[x] / v;
                dst[x] = std::min(dst[x], c);
            }
        }
    }
    return out;
}

RealArray max_filter(const RealArray& f, std::span<const Offset> offsets)
{
    std::vector<Offset> reflected;
    reflected.reserve(offsets.size());
    for (const Offset& o : offsets) {
        reflected.push_back(-o);
    }
    return dilate_add(f, ProbeFunction::flat(std::move(reflected), 0.0));
}

RealArray min_filter(const RealArray& f, std::span<const Offset> offsets)
{
    return erode_add(f, ProbeFunction::flat(std::vector<Offset>(offsets.begin(), offsets.end()), 0.0));
}

RankDrop RankDrop::fixed(std::size_t k)
{
    RankDrop d;
    d.fixed_ = true;
    d.k_ = k;
    return d;
}

RankDrop RankDrop::tolerance(double p)
{
    if (!(p > 0.0 && p <= 1.0)) {
        throw Error("tolerance p must lie in ]0, 1]");
    }
    RankDrop d;
    d.fixed_ = false;
    d.p_ = p;
    return d;
}

std::size_t RankDrop::count(std::size_t window_size) const
{
    const std::size_t k = fixed_ ? k_ : drop_count(p_, window_size);
    if (k >= window_size) {
        throw Error("rank drop count exhausts the window");
    }
    return k;
}

std::size_t drop_count(double p, std::size_t n)
{
    if (!(p > 0.0 && p <= 1.0)) {
        throw Error("tolerance p must lie in ]0, 1]");
    }
    if (n == 0) {
        return 0;
    }
    // The small bias absorbs representation error, e.g. (1 - 0.9) / 2 * 100 = 4.999...
    const double raw = (1.0 - p) / 2.0 * static_cast<double>(n) + 1e-9;
    const auto k = static_cast<std::size_t>(std::floor(raw));
    return std::min(k, (n - 1) / 2);
}

namespace {

// Per-pixel buffers holding the most extreme samples seen so far for one
// output row, pixel-major: level j of pixel x lives at [x * count + j].
// gate[x] mirrors the last kept level so the common rejection path only reads
// contiguous memory.
template <typename Better>
inline void admit(double* levels, double* gate, std::size_t count, int x, double c, Better better)
{
    double* kept = levels + static_cast<std::size_t>(x) * count;
    std::size_t j = count - 1;
    while (j > 0 && better(c, kept[j - 1])) {
        kept[j] = kept[j - 1];
        --j;
    }
    kept[j] = c;
    gate[x] = kept[count - 1];
}

template <typename Better>
void admit_row(double* levels, double* gate, std::size_t count, const double* src, double weight, SpanRange xs,
               Better better)
{
    for (int x = xs.begin; x < xs.end; ++x) {
        const double c = src[x] - weight;
        if (better(c, gate[x])) {
            admit(levels, gate, count, x, c, better);
        }
    }
}

std::size_t largest_drop(const Grid<int>& sizes, const RankDrop& drop)
{
    std::size_t k = 0;
    for (int n : sizes.values()) {
        if (n > 0) {
            k = std::max(k, drop.count(static_cast<std::size_t>(n)));
        }
    }
    return k;
}

// Offset visiting order for one side of a rank sweep. Offsets whose weight
// favours extreme samples on that side come first; ties are scrambled with a
// fixed generator because neighbouring offsets see correlated samples.
std::vector<std::size_t> sweep_order(const ProbeFunction& weights, bool top)
{
    std::vector<std::size_t> order(weights.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    for (std::size_t i = order.size(); i > 1; --i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        std::swap(order[i - 1], order[(state >> 33) % i]);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return top ? weights.value(a) < weights.value(b) : weights.value(a) > weights.value(b);
    });
    return order;
}

template <typename Better>
void sweep_side(const RealArray& f, const ProbeFunction& weights, const RankDrop& drop, const Grid<int>& sizes,
                std::size_t levels, double empty, Better better, RealArray& out)
{
    const int w = f.width();
    const std::vector<std::size_t> order = sweep_order(weights, empty < 0.0);
    std::vector<double> kept(levels * static_cast<std::size_t>(w));
    std::vector<double> gate(static_cast<std::size_t>(w));
    for (int y = 0; y < f.height(); ++y) {
        std::fill(kept.begin(), kept.end(), empty);
        std::fill(gate.begin(), gate.end(), empty);
        for (std::size_t i : order) {
            const Offset o = weights.offset(i);
            const int sy = y + o.dy;
            if (sy < 0 || sy >= f.height()) {
                continue;
            }
            admit_row(kept.data(), gate.data(), levels, f.row(sy).data() + o.dx, weights.value(i),
                      valid_range(w, o.dx), better);
        }
        for (int x = 0; x < w; ++x) {
            const int n = sizes(x, y);
            out(x, y) = n > 0 ? kept[static_cast<std::size_t>(x) * levels + drop.count(static_cast<std::size_t>(n))]
                              : empty;
        }
    }
}

void rank_sweep(const RealArray& f, const ProbeFunction& weights, const RankDrop& drop, const Grid<int>& sizes,
                std::size_t levels, RealArray* top, RealArray* bottom)
{
    if (top) {
        sweep_side(f, weights, drop, sizes, levels, -kInf, std::greater<double>{}, *top);
    }
    if (bottom) {
        sweep_side(f, weights, drop, sizes, levels, kInf, std::less<double>{}, *bottom);
    }
}

void rank_gather(const RealArray& f, const ProbeFunction& weights, const RankDrop& drop, RealArray* top,
                 RealArray* bottom)
{
    const detail::WindowIndexer windows(f.width(), f.height(), weights.offsets());
    const std::span<const double> w = weights.values();
    const std::span<const double> src = f.values();
    std::vector<double> samples;
    samples.reserve(weights.size());
    for (int y = 0; y < f.height(); ++y) {
        for (int x = 0; x < f.width(); ++x) {
            samples.clear();
            windows.visit(x, y, [&](std::size_t i, std::size_t idx) { samples.push_back(src[idx] - w[i]); });
            if (samples.empty()) {
                if (top) {
                    (*top)(x, y) = -kInf;
                }
                if (bottom) {
                    (*bottom)(x, y) = kInf;
                }
                continue;
            }
            const std::size_t k = drop.count(samples.size());
            if (top) {
                (*top)(x, y) = kth_largest(samples, k);
            }
            if (bottom) {
                (*bottom)(x, y) = kth_smallest(samples, k);
            }
        }
    }
}

void rank_filter(const RealArray& f, const ProbeFunction& weights, const RankDrop& drop, RealArray* top,
                 RealArray* bottom)
{
    const Grid<int> sizes = detail::window_sizes(f.width(), f.height(), weights.offsets());
    const std::size_t k = largest_drop(sizes, drop);
    if (k < kSmallRank) {
        rank_sweep(f, weights, drop, sizes, k + 1, top, bottom);
    } else {
        rank_gather(f, weights, drop, top, bottom);
    }
}

}  // namespace

RealArray rank_window(const RealArray& f, const ProbeFunction& weights, RankDrop drop, RankSide side)
{
    require_no_nan(f, "rank_window");
    RealArray out(f.width(), f.height());
    rank_filter(f, weights, drop, side == RankSide::Top ? &out : nullptr, side == RankSide::Bottom ? &out : nullptr);
    return out;
}

RankPair rank_window_pair(const RealArray& f, const ProbeFunction& weights, RankDrop drop)
{
    require_no_nan(f, "rank_window_pair");
    RankPair out{RealArray(f.width(), f.height()), RealArray(f.width(), f.height())};
    rank_filter(f, weights, drop, &out.top, &out.bottom);
    return out;
}

RealArray reconstruct_by_erosion(const RealArray& marker, const RealArray& mask)
{
    if (!marker.same_shape(mask)) {
        throw Error("reconstruction: marker and mask differ in shape");
    }
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!(marker[i] >= mask[i])) {
            throw Error("reconstruction by erosion requires marker >= mask");
        }
    }
    // Minimax flooding: each pixel takes the lowest level at which it can be
    // reached from some marker value along a path bounded below by the mask.
    const int w = mask.width();
    const int h = mask.height();
    RealArray level = marker;
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    for (std::size_t i = 0; i < level.size(); ++i) {
        queue.emplace(level[i], i);
    }
    while (!queue.empty()) {
        const auto [v, i] = queue.top();
        queue.pop();
        if (v > level[i]) {
            continue;
        }
        const int x = static_cast<int>(i % static_cast<std::size_t>(w));
        const int y = static_cast<int>(i / static_cast<std::size_t>(w));
        for_each_neighbour(w, h, x, y, [&](int nx, int ny) {
            const double candidate = std::max(v, mask(nx, ny));
            if (candidate < level(nx, ny)) {
                level(nx, ny) = candidate;
                queue.emplace(candidate, static_cast<std::size_t>(ny) * static_cast<std::size_t>(w) +
                                             static_cast<std::size_t>(nx));
            }
        });
    }
    return level;
}

RealArray hminima(const RealArray& f, double h)
{
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw Error("hminima: h must be a positive finite real");
    }
    for (double v : f.values()) {
        if (!std::isfinite(v)) {
            throw Error("hminima: input must be finite");
        }
    }
    RealArray raised = f;
    for (double& v : raised.values()) {
        v += h;
    }
    return reconstruct_by_erosion(raised, f);
}

LabelArray regional_minima(const RealArray& f)
{
    require_no_nan(f, "regional_minima");
    const int w = f.width();
    const int h = f.height();
    LabelArray labels(w, h, 0);
    Grid<std::uint8_t> visited(w, h, 0);
    std::vector<std::pair<int, int>> plateau;
    std::deque<std::pair<int, int>> frontier;
    int next_label = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (visited(x, y)) {
                continue;
            }
            const double level = f(x, y);
            bool is_minimum = true;
            plateau.clear();
            frontier.clear();
            frontier.emplace_back(x, y);
            visited(x, y) = 1;
            while (!frontier.empty()) {
                const auto [cx, cy] = frontier.front();
                frontier.pop_front();
                plateau.emplace_back(cx, cy);
                for_each_neighbour(w, h, cx, cy, [&](int nx, int ny) {
                    const double v = f(nx, ny);
                    if (v < level) {
                        is_minimum = false;
                    } else if (v == level && !visited(nx, ny)) {
                        visited(nx, ny) = 1;
                        frontier.emplace_back(nx, ny);
                    }
                });
            }
            if (is_minimum) {
                ++next_label;
                for (auto [px, py] : plateau) {
                    labels(px, py) = next_label;
                }
            }
        }
    }
    return labels;
}

LabelArray label_components(const Mask& mask, int* count)
{
    const int w = mask.width();
    const int h = mask.height();
    LabelArray labels(w, h, 0);
    std::deque<std::pair<int, int>> frontier;
    int next_label = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask(x, y) || labels(x, y) != 0) {
                continue;
            }
            ++next_label;
            labels(x, y) = next_label;
            frontier.emplace_back(x, y);
            while (!frontier.empty()) {
                const auto [cx, cy] = frontier.front();
                frontier.pop_front();
                for_each_neighbour(w, h, cx, cy, [&](int nx, int ny) {
                    if (mask(nx, ny) && labels(nx, ny) == 0) {
                        labels(nx, ny) = next_label;
                        frontier.emplace_back(nx, ny);
                    }
                });
            }
        }
    }
    if (count != nullptr) {
        *count = next_label;
    }
    return labels;
}

Mask area_opening(const Mask& mask, std::size_t min_area, std::size_t max_area)
{
    if (min_area == 0 || min_area > max_area) {
        throw Error("area filter bounds must satisfy 0 < min_area <= max_area");
    }
    int count = 0;
    const LabelArray labels = label_components(mask, &count);
    std::vector<std::size_t> areas(static_cast<std::size_t>(count) + 1, 0);
    for (int label : labels.values()) {
        ++areas[static_cast<std::size_t>(label)];
    }
    Mask out(mask.width(), mask.height(), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto label = static_cast<std::size_t>(labels[i]);
        if (label != 0 && areas[label] >= min_area && areas[label] <= max_area) {
            out[i] = 1;
        }
    }
    return out;
}

}  // namespace asplund
