#include "mmwfp/radio_map.hpp"

#include "mmwfp/error.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

namespace mmwfp {

static_assert(std::endian::native == std::endian::little, "radio-map I/O assumes a little-endian host");

namespace {

constexpr std::array<char, 8> kMagic{'M', 'M', 'W', 'F', 'P', 'R', 'M', '\0'};

class Writer {
public:
  template <typename T>
  void put(T v) {
    const auto* p = reinterpret_cast<const char*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  void put_u32(std::size_t v) {
    if (v > 0xffffffffULL) throw InvalidInput("radio map dimension exceeds 32 bits");
    put(static_cast<std::uint32_t>(v));
  }
  void put_str(const std::string& s) {
    put_u32(s.size());
    buf_.insert(buf_.end(), s.begin(), s.end());
  }
  void put_raw(const char* data, std::size_t n) { buf_.insert(buf_.end(), data, data + n); }
  const std::vector<char>& bytes() const { return buf_; }

private:
  std::vector<char> buf_;
};

class Reader {
public:
  explicit Reader(std::vector<char> data) : data_(std::move(data)) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::uint32_t get_u32() { return get<std::uint32_t>(); }
  std::string get_str() {
    const std::uint32_t n = get_u32();
    need(n);
    std::string s(data_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  void get_raw(char* out, std::size_t n) {
    need(n);
    std::memcpy(out, data_.data() + pos_, n);
    pos_ += n;
  }
  bool at_end() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }
  /// Reads an element count and checks the file can hold that many items.
  std::size_t get_count(std::size_t bytes_each) {
    const std::size_t count = get_u32();
    need(count * bytes_each);
    return count;
  }

private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw ParseError("radio map file is truncated at byte " + std::to_string(pos_));
  }

  std::vector<char> data_;
  std::size_t pos_ = 0;
};

} // namespace

std::uint64_t scene_codebook_hash(const Scene& scene) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& ap : scene.mmw_aps) {
    const std::uint64_t cb = scene.codebook_of(ap).hash();
    for (int i = 0; i < 8; ++i) {
      h ^= (cb >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

void save_radio_maps(const StoredRadioMaps& maps, const std::filesystem::path& path) {
  const std::size_t lps = maps.wifi.lps();
  const std::size_t n = maps.wifi.aps();
  const std::size_t m = maps.best.aps();
  if (maps.best.lps() != lps) throw InvalidInput("radio maps disagree on the LP count");

  Writer w;
  w.put_raw(kMagic.data(), kMagic.size());
  w.put(kRadioMapVersion);
  w.put_u32(lps);
  w.put_u32(n);
  w.put_u32(m);
  w.put(maps.codebook_hash);
  for (const auto& id : maps.wifi.ap_ids()) w.put_str(id);
  for (const auto& id : maps.best.ap_ids()) w.put_str(id);
  for (double v : maps.wifi.values()) w.put(v);
  for (SectorId v : maps.best.raw()) w.put(static_cast<std::uint32_t>(v));

  w.put_u32(maps.exemplars.entries.size());
  for (const auto& [key, entry] : maps.exemplars.entries) {
    w.put_u32(key.first);
    w.put_u32(key.second);
    w.put_u32(entry.member_lps.size());
    for (std::size_t lp : entry.member_lps) w.put_u32(lp);
    w.put_u32(entry.exemplar_members.size());
    for (std::size_t e : entry.exemplar_members) w.put_u32(e);
    for (const auto& vec : entry.vectors) {
      if (vec.size() != n) throw InvalidInput("exemplar vector length differs from the WiFi AP count");
      for (double v : vec) w.put(v);
    }
    for (std::size_t a : entry.assignment) w.put_u32(a);
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open radio map for writing: " + path.string());
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  if (!out) throw Error("failed writing radio map: " + path.string());
}

StoredRadioMaps load_radio_maps(const std::filesystem::path& path, const RadioMapExpectation& expect) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open radio map: " + path.string());
  std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(std::move(data));

  std::array<char, 8> magic{};
  r.get_raw(magic.data(), magic.size());
  if (magic != kMagic) throw ParseError("not a radio map file: " + path.string());
  const auto version = r.get<std::uint32_t>();
  if (version != kRadioMapVersion) {
    throw StaleMapError("radio map version " + std::to_string(version) + " is not supported (expected " +
                        std::to_string(kRadioMapVersion) + ")");
  }
  const std::size_t lps = r.get_u32();
  const std::size_t n = r.get_u32();
  const std::size_t m = r.get_u32();
  const auto hash = r.get<std::uint64_t>();

  if (expect.codebook_hash && *expect.codebook_hash != hash) {
    throw StaleMapError("radio map was built for a different codebook; rerun the offline phase");
  }
  auto check_dim = [](const char* what, std::size_t got, const std::optional<std::size_t>& want) {
    if (want && *want != got) {
      throw StaleMapError(std::string("radio map ") + what + " is " + std::to_string(got) + ", expected " +
                          std::to_string(*want));
    }
  };
  check_dim("LP count", lps, expect.lps);
  check_dim("WiFi AP count", n, expect.wifi_aps);
  check_dim("mm-w AP count", m, expect.mmw_aps);

  std::vector<std::string> wifi_ids(n), mmw_ids(m);
  for (auto& id : wifi_ids) id = r.get_str();
  for (auto& id : mmw_ids) id = r.get_str();

  if (lps * (8 * n + 4 * m) > r.remaining()) {
    throw ParseError("radio map file is truncated: header promises " + std::to_string(lps) + " LPs");
  }
  StoredRadioMaps out{WifiRssDb(lps, std::move(wifi_ids)), BestSectorDb(lps, std::move(mmw_ids)), {}, hash};
  for (double& v : out.wifi.values()) v = r.get<double>();
  for (SectorId& v : out.best.raw()) v = r.get<std::uint32_t>();

  const std::size_t entries = r.get_u32();
  for (std::size_t e = 0; e < entries; ++e) {
    const std::size_t ap = r.get_u32();
    const SectorId sector = r.get_u32();
    if (ap >= m) throw ParseError("exemplar entry references mm-w AP " + std::to_string(ap));
    SectorExemplars entry;
    entry.member_lps.resize(r.get_count(4));
    for (auto& lp : entry.member_lps) {
      lp = r.get_u32();
      if (lp >= lps) throw ParseError("exemplar entry references LP " + std::to_string(lp));
    }
    entry.exemplar_members.resize(r.get_count(4));
    for (auto& idx : entry.exemplar_members) {
      idx = r.get_u32();
      if (idx >= entry.member_lps.size()) throw ParseError("exemplar index out of range");
    }
    entry.vectors.assign(entry.exemplar_members.size(), std::vector<double>(n));
    for (auto& vec : entry.vectors) {
      for (double& v : vec) v = r.get<double>();
    }
    entry.assignment.resize(entry.member_lps.size());
    for (auto& a : entry.assignment) {
      a = r.get_u32();
      if (a >= entry.exemplar_members.size()) throw ParseError("cluster assignment out of range");
    }
    if (!out.exemplars.entries.emplace(ExemplarKey{ap, sector}, std::move(entry)).second) {
      throw ParseError("duplicate exemplar entry");
    }
  }
  if (!r.at_end()) throw ParseError("trailing bytes after radio map payload");
  return out;
}

} // namespace mmwfp
