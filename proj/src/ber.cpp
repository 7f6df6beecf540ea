#include "dnhb/ber.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

#include "dnhb/errors.hpp"

namespace dnhb {

DnhbTransceiver::DnhbTransceiver(DnhbModel model, ChannelRealization realization,
                                 std::string label)
    : model_(std::move(model)),
      realization_(std::move(realization)),
      label_(std::move(label)) {
  validate_model(model_);
}

std::vector<ComplexMatrix> DnhbTransceiver::transmit_receive(
    const ComplexMatrix& symbols, double noise_variance, Rng& rng) const {
  return model_forward(model_, symbols, realization_, noise_variance, rng);
}

FixedLinearTransceiver::FixedLinearTransceiver(LinearTransceiver tx,
                                               ChannelRealization realization,
                                               SystemConfig cfg)
    : tx_(std::move(tx)), realization_(std::move(realization)), cfg_(cfg) {}

std::vector<ComplexMatrix> FixedLinearTransceiver::transmit_receive(
    const ComplexMatrix& symbols, double noise_variance, Rng& rng) const {
  return evaluate_linear_transceiver(tx_, realization_, symbols,
                                     noise_variance, rng);
}

OmpHybridTransceiver::OmpHybridTransceiver(OmpHybridSolution solution,
                                           ChannelRealization realization,
                                           SystemConfig cfg)
    : solution_(std::move(solution)),
      realization_(std::move(realization)),
      cfg_(cfg) {}

std::vector<ComplexMatrix> OmpHybridTransceiver::transmit_receive(
    const ComplexMatrix& symbols, double noise_variance, Rng& rng) const {
  const LinearTransceiver tx =
      omp_transceiver(solution_, realization_, cfg_, noise_variance);
  return evaluate_linear_transceiver(tx, realization_, symbols, noise_variance,
                                     rng);
}

TrialResult ber_trial(const Transceiver& transceiver, double snr_db,
                      std::uint64_t n_bits, const Constellation& constellation,
                      Rng& rng) {
  const SystemConfig& cfg = transceiver.config();
  const std::size_t streams = cfg.total_streams();
  const std::size_t bps = constellation.bits_per_symbol();
  const std::uint64_t bits_per_use = bps * streams;
  if (n_bits < bits_per_use)
    throw ConfigError("ber_trial: need at least " +
                      std::to_string(bits_per_use) + " bits per trial, got " +
                      std::to_string(n_bits));
  const double noise_variance =
      cfg.power_budget / std::pow(10.0, snr_db / 10.0);
  const std::uint64_t n_uses = (n_bits + bits_per_use - 1) / bits_per_use;

  TrialResult result;
  const std::uint64_t chunk_uses = 32768;
  for (std::uint64_t done = 0; done < n_uses; done += chunk_uses) {
    const std::size_t uses =
        static_cast<std::size_t>(std::min(chunk_uses, n_uses - done));

    // Bits in (use, stream, bit) order; symbol s of use b sits at column b.
    std::vector<std::uint8_t> sent_bits(uses * streams * bps);
    for (auto& b : sent_bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1);
    const auto symbols = constellation.modulate(sent_bits);
    ComplexMatrix batch(streams, uses);
    for (std::size_t use = 0; use < uses; ++use)
      for (std::size_t r = 0; r < streams; ++r)
        batch.set(r, use, symbols[use * streams + r]);

    const auto received =
        transceiver.transmit_receive(batch, noise_variance, rng);
    if (received.size() != cfg.k_users)
      throw ShapeError("ber_trial: transceiver returned " +
                       std::to_string(received.size()) + " user blocks");

    for (std::size_t k = 0; k < cfg.k_users; ++k)
      for (std::size_t s = 0; s < cfg.n_s; ++s)
        for (std::size_t use = 0; use < uses; ++use) {
          const std::size_t decoded =
              constellation.nearest_index(received[k].at(s, use));
          const std::size_t row = k * cfg.n_s + s;
          const std::size_t offset = (use * streams + row) * bps;
          for (std::size_t b = 0; b < bps; ++b) {
            const std::uint8_t sent = sent_bits[offset + b];
            const std::uint8_t got =
                static_cast<std::uint8_t>((decoded >> (bps - 1 - b)) & 1);
            if (sent != got) ++result.errors;
          }
        }
    result.bits += uses * bits_per_use;
  }
  return result;
}

TrialResult ber_trial(const DnhbModel& model,
                      const ChannelRealization& realization, double snr_db,
                      std::uint64_t n_bits, const Constellation& constellation,
                      Rng& rng) {
  return ber_trial(DnhbTransceiver(model, realization), snr_db, n_bits,
                   constellation, rng);
}

TrialResult ber_trial(const LinearTransceiver& tx,
                      const ChannelRealization& realization,
                      const SystemConfig& cfg, double snr_db,
                      std::uint64_t n_bits, const Constellation& constellation,
                      Rng& rng) {
  return ber_trial(FixedLinearTransceiver(tx, realization, cfg), snr_db,
                   n_bits, constellation, rng);
}

BerCurve snr_sweep(const TransceiverFactory& factory,
                   const std::vector<ChannelRealization>& channel_set,
                   const std::vector<double>& snr_grid_db,
                   std::uint64_t bits_per_point,
                   const Constellation& constellation,
                   std::uint64_t master_seed, std::size_t jobs) {
  if (channel_set.empty())
    throw ConfigError("snr_sweep: empty channel set");
  if (snr_grid_db.empty())
    throw ConfigError("snr_sweep: empty SNR grid");
  if (jobs == 0) jobs = 1;

  struct PerRealization {
    std::vector<std::uint64_t> errors;
    std::vector<std::uint64_t> bits;
    std::string label;
  };

  auto run_one = [&](std::size_t idx) -> PerRealization {
    const ChannelRealization& realization = channel_set[idx];
    const std::uint64_t realization_seed = Rng::child_seed(master_seed, idx);
    PerRealization out;
    out.errors.assign(snr_grid_db.size(), 0);
    out.bits.assign(snr_grid_db.size(), 0);
    std::unique_ptr<Transceiver> transceiver;
    try {
      transceiver = factory(realization, realization_seed);
      out.label = transceiver->label();
      for (std::size_t p = 0; p < snr_grid_db.size(); ++p) {
        Rng trial_rng(Rng::child_seed(realization_seed, 1000 + p));
        const TrialResult trial = ber_trial(
            *transceiver, snr_grid_db[p], bits_per_point, constellation,
            trial_rng);
        out.errors[p] = trial.errors;
        out.bits[p] = trial.bits;
      }
    } catch (const Error& e) {
      throw Error("snr_sweep: realization " +
                  std::to_string(realization.realization_id) + ": " + e.what());
    }
    return out;
  };

  // Concurrent over realizations in waves of `jobs`; the merge below runs in
  // index order, so the result is independent of completion order.
  std::vector<PerRealization> results(channel_set.size());
  for (std::size_t start = 0; start < channel_set.size(); start += jobs) {
    const std::size_t end = std::min(start + jobs, channel_set.size());
    std::vector<std::future<PerRealization>> wave;
    for (std::size_t i = start; i < end; ++i)
      wave.push_back(std::async(std::launch::async, run_one, i));
    for (std::size_t i = start; i < end; ++i) results[i] = wave[i - start].get();
  }

  BerCurve curve;
  curve.method = results.front().label;
  curve.snr_db = snr_grid_db;
  curve.errors.assign(snr_grid_db.size(), 0);
  curve.bits.assign(snr_grid_db.size(), 0);
  curve.realization_count = channel_set.size();
  curve.seed = master_seed;
  for (const auto& r : results)
    for (std::size_t p = 0; p < snr_grid_db.size(); ++p) {
      curve.errors[p] += r.errors[p];
      curve.bits[p] += r.bits[p];
    }
  return curve;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string ber_csv_string(const BerCurve& curve) {
  std::string out = "method,snr_db,ber,errors,bits,realizations,seed\n";
  for (std::size_t i = 0; i < curve.snr_db.size(); ++i) {
    out += curve.method;
    out += ',';
    out += format_double(curve.snr_db[i]);
    out += ',';
    out += format_double(curve.ber(i));
    out += ',';
    out += std::to_string(curve.errors[i]);
    out += ',';
    out += std::to_string(curve.bits[i]);
    out += ',';
    out += std::to_string(curve.realization_count);
    out += ',';
    out += std::to_string(curve.seed);
    out += '\n';
  }
  return out;
}

void write_ber_csv(const std::string& path, const BerCurve& curve) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << ber_csv_string(curve);
  if (!out) throw IoError("write failure on " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& text, const std::string& context) {
  double value = 0.0;
  const auto res =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ParseError(context + ": not a number: '" + text + "'");
  return value;
}

std::uint64_t parse_u64(const std::string& text, const std::string& context) {
  std::uint64_t value = 0;
  const auto res =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ParseError(context + ": not an integer: '" + text + "'");
  return value;
}

}  // namespace

BerCurve read_ber_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file for reading: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(path + ": empty file");
  if (line != "method,snr_db,ber,errors,bits,realizations,seed")
    throw ParseError(path + ": unexpected CSV header: '" + line + "'");

  BerCurve curve;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string context = path + ":" + std::to_string(line_no);
    const auto fields = split_csv_line(line);
    if (fields.size() != 7)
      throw ParseError(context + ": expected 7 fields, found " +
                       std::to_string(fields.size()));
    if (curve.method.empty())
      curve.method = fields[0];
    else if (curve.method != fields[0])
      throw ParseError(context + ": mixed methods in one curve file");
    curve.snr_db.push_back(parse_double(fields[1], context));
    curve.errors.push_back(parse_u64(fields[3], context));
    curve.bits.push_back(parse_u64(fields[4], context));
    curve.realization_count = parse_u64(fields[5], context);
    curve.seed = parse_u64(fields[6], context);
    if (curve.bits.back() == 0)
      throw ParseError(context + ": zero bit count");
  }
  if (curve.snr_db.empty()) throw ParseError(path + ": no data rows");
  return curve;
}

}  // namespace dnhb
