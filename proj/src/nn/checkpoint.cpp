#include "nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "common/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint blob is written as host little-endian");

namespace argpair::nn {

using nlohmann::json;

static const char kMagic[8] = {'A', 'P', 'C', 'K', 'P', 'T', '0', '1'};

void save_checkpoint(const ParameterStore& store, const json& meta, const std::string& path) {
  json header;
  header["meta"] = meta;
  header["params"] = json::array();

  std::string blob;
  bool f32 = store.dtype() == Dtype::f32;
  for (const Parameter* p : store.all()) {
    json entry;
    entry["name"] = p->name;
    entry["shape"] = p->value.shape();
    entry["offset"] = blob.size();
    entry["dtype"] = f32 ? "f32" : "f64";
    header["params"].push_back(entry);

    if (f32) {
      for (int i = 0; i < p->value.size(); ++i) {
        float v = static_cast<float>(p->value[i]);
        blob.append(reinterpret_cast<const char*>(&v), sizeof(float));
      }
    } else {
      blob.append(reinterpret_cast<const char*>(p->value.data()),
                  static_cast<size_t>(p->value.size()) * sizeof(double));
    }
  }

  std::string head = header.dump();
  uint64_t head_len = head.size();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(&head_len), sizeof(head_len));
  out.write(head.data(), static_cast<std::streamsize>(head.size()));
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw data_error("short write while saving checkpoint: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open checkpoint: " + path);

  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw data_error("not a checkpoint file: " + path);

  uint64_t head_len = 0;
  in.read(reinterpret_cast<char*>(&head_len), sizeof(head_len));
  std::string head(head_len, '\0');
  in.read(head.data(), static_cast<std::streamsize>(head_len));
  if (!in) throw data_error("truncated checkpoint header: " + path);

  json header = json::parse(head, nullptr, false);
  if (header.is_discarded()) throw data_error("corrupt checkpoint header: " + path);

  std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  Dtype dtype = Dtype::f64;
  if (!header["params"].empty() && header["params"][0].value("dtype", "f64") == "f32")
    dtype = Dtype::f32;

  LoadedCheckpoint loaded;
  loaded.store = std::make_unique<ParameterStore>(dtype);
  for (const auto& entry : header["params"]) {
    std::vector<int> shape = entry["shape"].get<std::vector<int>>();
    Parameter& p = loaded.store->create(entry["name"].get<std::string>(), shape);
    size_t offset = entry["offset"].get<size_t>();
    bool f32 = entry.value("dtype", "f64") == "f32";
    size_t width = f32 ? sizeof(float) : sizeof(double);
    size_t need = offset + static_cast<size_t>(p.value.size()) * width;
    if (need > blob.size()) throw data_error("truncated checkpoint blob: " + path);
    const char* src = blob.data() + offset;
    for (int i = 0; i < p.value.size(); ++i) {
      if (f32) {
        float v;
        std::memcpy(&v, src + static_cast<size_t>(i) * width, width);
        p.value[i] = static_cast<double>(v);
      } else {
        double v;
        std::memcpy(&v, src + static_cast<size_t>(i) * width, width);
        p.value[i] = v;
      }
    }
  }
  loaded.meta_json = header["meta"].dump();
  return loaded;
}

}  // namespace argpair::nn
