#include "flexacc/funcsim.hpp"

#include <functional>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "flexacc/conv_reference.hpp"
#include "flexacc/error.hpp"

namespace flexacc {
namespace {

using Index = std::array<std::int64_t, 5>;

// Axis-aligned block of a tensor. Unused trailing axes have length 1.
struct Box {
  Index lo{};
  Index len{1, 1, 1, 1, 1};

  std::int64_t volume() const {
    std::int64_t v = 1;
    for (auto l : len) v *= l;
    return v;
  }
  bool contains(const Index& i) const {
    for (int a = 0; a < 5; ++a)
      if (i[a] < lo[a] || i[a] >= lo[a] + len[a]) return false;
    return true;
  }
  std::size_t offset(const Index& i) const {
    std::int64_t off = 0;
    for (int a = 0; a < 5; ++a) off = off * len[a] + (i[a] - lo[a]);
    return static_cast<std::size_t>(off);
  }
  friend bool operator==(const Box&, const Box&) = default;
};

template <typename Fn>
void for_each_index(const Box& box, Fn&& fn) {
  Index i;
  for (i[0] = box.lo[0]; i[0] < box.lo[0] + box.len[0]; ++i[0])
    for (i[1] = box.lo[1]; i[1] < box.lo[1] + box.len[1]; ++i[1])
      for (i[2] = box.lo[2]; i[2] < box.lo[2] + box.len[2]; ++i[2])
        for (i[3] = box.lo[3]; i[3] < box.lo[3] + box.len[3]; ++i[3])
          for (i[4] = box.lo[4]; i[4] < box.lo[4] + box.len[4]; ++i[4]) fn(i);
}

struct Store {
  Box box;
  std::vector<Value> data;
  bool valid = false;

  Value& at(const Index& i) { return data[box.offset(i)]; }
};

struct Span {
  std::array<std::int64_t, 5> lo{};  // indexed by Dim
  std::array<std::int64_t, 5> len{};
  std::int64_t end(Dim d) const { return lo[index(d)] + len[index(d)]; }
};

class Simulator {
 public:
  Simulator(const LayerShape& layer, const Config& config, const ArchSpec& arch,
            const Tensor& input, const Tensor& filters, const SimOptions& options)
      : layer_(layer),
        config_(config),
        options_(options),
        tiles_(clipped_levels(layer, config.tiles)),
        levels_(static_cast<int>(tiles_.size())),
        input_(input),
        filters_(filters),
        out_(output_dims(layer)),
        touched_(out_.size(), 0),
        stores_(levels_),
        got_fill_(levels_, false),
        got_writeback_(levels_, false) {
    trace_.boundaries.resize(levels_);
    trace_.pe_maccs.assign(arch.total_pes(), 0);
    dram_[0] = {input_box(), {}, true};
    dram_[1] = {filter_box(), {}, true};
    dram_[2] = {psum_box(), {}, true};
    for (int t = 0; t < 3; ++t) bytes_[t] = element_bytes(layer, static_cast<DataType>(t));
  }

  SimResult run() {
    Span whole;
    auto total = layer_extent(layer_);
    for (auto d : kAllDims) whole.len[index(d)] = total.get(d);
    walk(0, whole);
    for (int l = levels_ - 1; l >= 0; --l) evict_psum(l);
    SimResult r;
    r.output = std::move(out_);
    r.trace = std::move(trace_);
    return r;
  }

 private:
  Box input_box(const Span* s = nullptr) const {
    Box b;
    b.len = {layer_.F, layer_.C, layer_.W, layer_.H, 1};
    if (!s) return b;
    auto axis = [&](Dim d, std::int64_t filt, std::int64_t str, int a) {
      b.lo[a] = s->lo[index(d)] * str;
      b.len[a] = input_tile_extent(s->len[index(d)], filt, str);
    };
    axis(Dim::F, layer_.T, layer_.stride_f, 0);
    b.lo[1] = s->lo[index(Dim::C)];
    b.len[1] = s->len[index(Dim::C)];
    axis(Dim::W, layer_.S, layer_.stride_w, 2);
    axis(Dim::H, layer_.R, layer_.stride_h, 3);
    return b;
  }
  Box filter_box(const Span* s = nullptr) const {
    Box b;
    b.len = {layer_.K, layer_.T, layer_.C, layer_.S, layer_.R};
    if (!s) return b;
    b.lo[0] = s->lo[index(Dim::K)];
    b.len[0] = s->len[index(Dim::K)];
    b.lo[2] = s->lo[index(Dim::C)];
    b.len[2] = s->len[index(Dim::C)];
    return b;
  }
  Box psum_box(const Span* s = nullptr) const {
    auto o = output_shape(layer_);
    Box b;
    b.len = {o.F, o.K, o.W, o.H, 1};
    if (!s) return b;
    const Dim axes[4] = {Dim::F, Dim::K, Dim::W, Dim::H};
    for (int a = 0; a < 4; ++a) {
      b.lo[a] = s->lo[index(axes[a])];
      b.len[a] = s->len[index(axes[a])];
    }
    return b;
  }

  Value source_value(int level, int type, const Index& i) {
    if (level == 0) {
      const Box& box = dram_[type].box;
      auto off = box.offset(i);
      if (type == 0) return input_.data()[off];
      if (type == 1) return filters_.data()[off];
      return out_.data()[off];
    }
    Store& parent = stores_[level - 1][type];
    if (!parent.valid || !parent.box.contains(i))
      throw std::logic_error("simulator: parent buffer does not hold requested data");
    return parent.at(i);
  }

  void record(int boundary, DataType type, TraceRecord::Kind kind, std::int64_t elements) {
    if (!options_.record_events) return;
    trace_.records.push_back(
        {boundary, type, kind, elements, elements * bytes_[index(type)]});
  }

  void fetch(int level, DataType type, const Box& box) {
    const int t = index(type);
    Store& cur = stores_[level][t];
    if (cur.valid && cur.box == box) return;

    // Inputs moving forward along exactly one of F, W, H keep the overlap.
    bool slide = false;
    if (type == DataType::Input && cur.valid) {
      int changed = -1, diffs = 0;
      for (int a = 0; a < 5; ++a)
        if (cur.box.lo[a] != box.lo[a] || cur.box.len[a] != box.len[a]) {
          changed = a;
          ++diffs;
        }
      slide = diffs == 1 && changed != 1 && box.lo[changed] > cur.box.lo[changed];
    }

    Store next{box, std::vector<Value>(static_cast<std::size_t>(box.volume())), true};
    std::int64_t fetched = 0;
    for_each_index(box, [&](const Index& i) {
      if (slide && cur.box.contains(i)) {
        next.at(i) = cur.at(i);
      } else {
        next.at(i) = source_value(level, t, i);
        ++fetched;
      }
    });
    cur = std::move(next);
    auto& tc = trace_.boundaries[level][type];
    tc.fills += 1;
    tc.fill_elements += fetched;
    got_fill_[level] = true;
    record(level, type, TraceRecord::Kind::Fill, fetched);
  }

  void evict_psum(int level) {
    Store& cur = stores_[level][2];
    if (!cur.valid) return;
    for (int l = levels_ - 1; l > level; --l) evict_psum(l);
    for_each_index(cur.box, [&](const Index& i) {
      if (level == 0) {
        out_.data()[dram_[2].box.offset(i)] = cur.at(i);
      } else {
        Store& parent = stores_[level - 1][2];
        if (!parent.valid || !parent.box.contains(i))
          throw std::logic_error("simulator: psum eviction target missing");
        parent.at(i) = cur.at(i);
      }
    });
    auto& tc = trace_.boundaries[level][DataType::Psum];
    tc.writebacks += 1;
    tc.writeback_elements += cur.box.volume();
    if (level > 0) got_writeback_[level - 1] = true;
    record(level, DataType::Psum, TraceRecord::Kind::Writeback, cur.box.volume());
    cur.valid = false;
  }

  void load_psum(int level, const Box& box) {
    Store& cur = stores_[level][2];
    if (cur.valid && cur.box == box) return;
    evict_psum(level);
    std::int64_t seen = 0;
    for_each_index(box, [&](const Index& i) { seen += touched_[dram_[2].box.offset(i)]; });
    if (seen != 0 && seen != box.volume())
      throw std::logic_error("simulator: partially accumulated psum tile");
    Store next{box, std::vector<Value>(static_cast<std::size_t>(box.volume()), 0), true};
    if (seen) {
      for_each_index(box, [&](const Index& i) { next.at(i) = source_value(level, 2, i); });
      auto& tc = trace_.boundaries[level][DataType::Psum];
      tc.fills += 1;
      tc.fill_elements += box.volume();
      got_fill_[level] = true;
      record(level, DataType::Psum, TraceRecord::Kind::Fill, box.volume());
    }
    cur = std::move(next);
  }

  void visit(int level, const Span& tile) {
    if (level == 0) {
      for (int l = levels_ - 1; l >= 1; --l) {
        evict_psum(l);
        stores_[l][0].valid = false;
        stores_[l][1].valid = false;
      }
      top_ = tile;
    }
    fetch(level, DataType::Input, input_box(&tile));
    fetch(level, DataType::Filter, filter_box(&tile));
    load_psum(level, psum_box(&tile));
  }

  void walk(int level, const Span& parent) {
    const LoopOrder& order = level == 0 ? config_.outer : config_.inner;
    const TileExtent& size = tiles_[level];
    Span tile = parent;
    std::function<void(int)> loop = [&](int pos) {
      if (pos == 5) {
        visit(level, tile);
        if (level + 1 < levels_)
          walk(level + 1, tile);
        else
          compute(tile);
        return;
      }
      Dim d = order.at(pos);
      const int di = index(d);
      for (auto s = parent.lo[di]; s < parent.end(d); s += size.get(d)) {
        tile.lo[di] = s;
        tile.len[di] = std::min(size.get(d), parent.end(d) - s);
        loop(pos + 1);
      }
    };
    loop(0);
  }

  void compute(const Span& tile) {
    const int bottom = levels_ - 1;
    Store& in = stores_[bottom][0];
    Store& fl = stores_[bottom][1];
    Store& ps = stores_[bottom][2];
    const std::int64_t vw = config_.vector_width;
    const auto& par = config_.parallelism;
    const Box& outs = dram_[2].box;
    auto lo = [&](Dim d) { return tile.lo[index(d)]; };
    auto end = [&](Dim d) { return tile.end(d); };
    std::vector<Value> acc(static_cast<std::size_t>(vw));

    for (auto k0 = lo(Dim::K); k0 < end(Dim::K); k0 += vw) {
      const auto lanes = std::min(vw, end(Dim::K) - k0);
      for (auto f = lo(Dim::F); f < end(Dim::F); ++f)
        for (auto w = lo(Dim::W); w < end(Dim::W); ++w)
          for (auto h = lo(Dim::H); h < end(Dim::H); ++h) {
            for (std::int64_t j = 0; j < lanes; ++j) {
              Index oi{f, k0 + j, w, h, 0};
              if (touched_[outs.offset(oi)]) {
                acc[j] = ps.at(oi);
                trace_.datapath.psum_reads++;
              } else {
                acc[j] = 0;
              }
            }
            for (auto c = lo(Dim::C); c < end(Dim::C); ++c)
              for (std::int64_t t = 0; t < layer_.T; ++t)
                for (std::int64_t s = 0; s < layer_.S; ++s)
                  for (std::int64_t r = 0; r < layer_.R; ++r) {
                    Value x = in.at({f * layer_.stride_f + t, c, w * layer_.stride_w + s,
                                     h * layer_.stride_h + r, 0});
                    trace_.datapath.input_reads++;
                    for (std::int64_t j = 0; j < lanes; ++j) {
                      acc[j] += x * fl.at({k0 + j, t, c, s, r});
                      trace_.datapath.filter_reads++;
                    }
                  }
            const std::int64_t hp = (h - top_.lo[index(Dim::H)]) % par.hp;
            const std::int64_t wp = (w - top_.lo[index(Dim::W)]) % par.wp;
            const std::int64_t kp = ((k0 - top_.lo[index(Dim::K)]) / vw) % par.kp;
            const std::int64_t fp = (f - top_.lo[index(Dim::F)]) % par.fp;
            const auto pe = static_cast<std::size_t>(((hp * par.wp + wp) * par.kp + kp) * par.fp + fp);
            const std::int64_t work = lanes * (end(Dim::C) - lo(Dim::C)) * layer_.R * layer_.S * layer_.T;
            trace_.pe_maccs[pe] += work;
            trace_.maccs += work;
            for (std::int64_t j = 0; j < lanes; ++j) {
              Index oi{f, k0 + j, w, h, 0};
              ps.at(oi) = acc[j];
              touched_[outs.offset(oi)] = 1;
              trace_.datapath.psum_writes++;
            }
          }
    }
    for (int l = 0; l < levels_; ++l) {
      if (got_fill_[l] && got_writeback_[l]) trace_.conflict_stalls++;
      got_fill_[l] = got_writeback_[l] = false;
    }
  }

  const LayerShape& layer_;
  const Config& config_;
  SimOptions options_;
  std::vector<TileExtent> tiles_;
  int levels_;
  const Tensor& input_;
  const Tensor& filters_;
  Tensor out_;
  std::vector<std::uint8_t> touched_;
  std::vector<std::array<Store, 3>> stores_;
  std::array<Store, 3> dram_;
  std::array<std::int64_t, 3> bytes_{};
  std::vector<bool> got_fill_;
  std::vector<bool> got_writeback_;
  Span top_;
  EventTrace trace_;
};

}  // namespace

SimResult simulate(const LayerShape& layer, const Config& config, const ArchSpec& arch,
                   const Tensor& input, const Tensor& filters, const SimOptions& options) {
  layer.validate();
  validate_tiles(layer, config.tiles);
  if (config.vector_width < 1) throw ValidationError("vector_width must be >= 1");
  check_capacity(layer, config.tiles, arch);
  parallel_assignment(config, arch, layer);
  if (input.dims() != input_dims(layer) || filters.dims() != filter_dims(layer)) {
    // Reuse the oracle's axis-naming diagnostics.
    conv3d_reference(input, filters, layer);
    throw DimensionError("tensor extents do not match the layer");
  }
  return Simulator(layer, config, arch, input, filters, options).run();
}

TrafficCounts count_accesses(const EventTrace& trace) {
  TrafficCounts c;
  c.boundaries = trace.boundaries;
  c.datapath = trace.datapath;
  c.maccs = trace.maccs;
  return c;
}

std::string dump_trace(const EventTrace& trace, const ArchSpec& arch) {
  auto level_name = [&](int l) {
    return l < static_cast<int>(arch.levels.size()) ? arch.levels[l].name : "L" + std::to_string(l);
  };
  std::string out;
  for (const auto& r : trace.records) {
    nlohmann::ordered_json j;
    std::string upper = r.boundary == 0 ? std::string("DRAM") : level_name(r.boundary - 1);
    std::string lower = level_name(r.boundary);
    bool fill = r.kind == TraceRecord::Kind::Fill;
    j["from"] = fill ? upper : lower;
    j["to"] = fill ? lower : upper;
    j["datatype"] = std::string(to_string(r.type));
    j["event"] = fill ? "fill" : "writeback";
    j["elements"] = r.elements;
    j["bytes"] = r.bytes;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace flexacc
