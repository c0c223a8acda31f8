// Copyright 2026 The hldsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to hldsim. All functions return an hldsim_status; on failure
 * hldsim_last_error() holds a one-line message for the calling thread.
 * Handles are opaque and must be released with the matching destroy call. */

#ifndef HLDSIM_HLDSIM_H_
#define HLDSIM_HLDSIM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(HLDSIM_BUILDING_LIBRARY)
#define HLDSIM_API __attribute__((visibility("default")))
#else
#define HLDSIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hldsim_status {
  HLDSIM_OK = 0,
  HLDSIM_ERR_INVALID_ARGUMENT = 1,
  HLDSIM_ERR_NOT_FOUND = 2,
  HLDSIM_ERR_IO = 3,
  HLDSIM_ERR_FORMAT = 4,
  HLDSIM_ERR_NO_CROSSING = 5,
  HLDSIM_ERR_NOT_CONVERGED = 6,
  HLDSIM_ERR_BUFFER_TOO_SMALL = 7,
  HLDSIM_ERR_RUNTIME = 8,
  HLDSIM_ERR_INTERNAL = 9
} hldsim_status;

typedef enum hldsim_transfer {
  HLDSIM_TRANSFER_TANH = 0,
  HLDSIM_TRANSFER_RELU = 1,
  HLDSIM_TRANSFER_SQNL = 2
} hldsim_transfer;

typedef enum hldsim_decoder_kind {
  HLDSIM_DECODER_TRIVIAL = 0, /* pure-error decoder only */
  HLDSIM_DECODER_MWPM = 1,
  HLDSIM_DECODER_HLD = 2      /* pure-error decoder + network */
} hldsim_decoder_kind;

typedef enum hldsim_failure_mode {
  HLDSIM_FAIL_ANY = 0,
  HLDSIM_FAIL_X = 1,
  HLDSIM_FAIL_Z = 2
} hldsim_failure_mode;

typedef enum hldsim_node_kind {
  HLDSIM_NODE_INPUT = 0,
  HLDSIM_NODE_HIDDEN = 1,
  HLDSIM_NODE_OUTPUT = 2
} hldsim_node_kind;

HLDSIM_API const char* hldsim_version(void);
HLDSIM_API const char* hldsim_last_error(void);
HLDSIM_API const char* hldsim_status_string(hldsim_status status);

/* ---- layout ---- */

typedef struct hldsim_layout hldsim_layout;

HLDSIM_API hldsim_status hldsim_layout_create(int distance, hldsim_layout** out);
HLDSIM_API void hldsim_layout_destroy(hldsim_layout* layout);
HLDSIM_API int hldsim_layout_distance(const hldsim_layout* layout);
HLDSIM_API int hldsim_layout_num_data(const hldsim_layout* layout);
HLDSIM_API int hldsim_layout_num_ancillas(const hldsim_layout* layout);
/* Writes a NUL-terminated JSON description. *needed (if non-NULL) receives
 * the required size including the terminator. */
HLDSIM_API hldsim_status hldsim_layout_json(const hldsim_layout* layout, char* buf, size_t cap,
                                            size_t* needed);
/* Syndrome of an error given as two 0/1 planes of num_data entries. */
HLDSIM_API hldsim_status hldsim_syndrome(const hldsim_layout* layout, const uint8_t* x,
                                         const uint8_t* z, uint8_t* syndrome);

/* ---- networks ---- */

typedef struct hldsim_network_config {
  int distance;
  int n1;
  int n2;
  hldsim_transfer transfer;
  int rotated;
  int bits; /* 0 for a float network */
  int extra_sample_bit;
} hldsim_network_config;

typedef struct hldsim_network hldsim_network;

HLDSIM_API void hldsim_network_config_default(hldsim_network_config* cfg);
/* Fresh network with uniform initial weights. */
HLDSIM_API hldsim_status hldsim_network_create(const hldsim_network_config* cfg, uint64_t seed,
                                               hldsim_network** out);
HLDSIM_API hldsim_status hldsim_network_load(const char* path, hldsim_network** out);
HLDSIM_API hldsim_status hldsim_network_save(const hldsim_network* net, const char* path);
HLDSIM_API void hldsim_network_destroy(hldsim_network* net);
HLDSIM_API hldsim_status hldsim_network_get_config(const hldsim_network* net,
                                                   hldsim_network_config* cfg);
HLDSIM_API int64_t hldsim_network_samples_seen(const hldsim_network* net);
/* Copy of `net` with weights quantized to `bits` (fixed-point inference). */
HLDSIM_API hldsim_status hldsim_network_quantize(const hldsim_network* net, int bits,
                                                 int extra_sample_bit, hldsim_network** out);
HLDSIM_API hldsim_status hldsim_network_predict(const hldsim_network* net, const uint8_t* syndrome,
                                                size_t n, int* lx, int* lz);

/* ---- training ---- */

typedef struct hldsim_train_config {
  int64_t batch_size;
  int64_t n_batches;
  double learning_rate;
  double beta1;
  double beta2;
  double epsilon;
  double reg_scale;
  int reg_bits;
  double p_train; /* <= 0 selects the default rate for the distance */
  uint64_t seed;
  int64_t log_every;
  int threads;
} hldsim_train_config;

typedef struct hldsim_train_row {
  int64_t iteration;
  int64_t samples_seen;
  double ler;
  double loss;
} hldsim_train_row;

/* `current` is only valid during the call. */
typedef void (*hldsim_train_callback)(const hldsim_train_row* row, const hldsim_network* current,
                                      void* user);

HLDSIM_API void hldsim_train_config_default(hldsim_train_config* cfg);
/* Continues training `net` in place. Quantized networks keep their bit
 * width and are re-quantized after training. */
HLDSIM_API hldsim_status hldsim_train(hldsim_network* net, const hldsim_train_config* cfg,
                                      hldsim_train_callback callback, void* user);

/* ---- decoders and evaluation ---- */

typedef struct hldsim_decoder hldsim_decoder;

/* `net` is required for HLDSIM_DECODER_HLD and copied; quantized networks
 * decode in fixed point. */
HLDSIM_API hldsim_status hldsim_decoder_create(int distance, hldsim_decoder_kind kind,
                                               const hldsim_network* net, hldsim_decoder** out);
HLDSIM_API void hldsim_decoder_destroy(hldsim_decoder* decoder);
/* Correction for one syndrome of num_ancillas bits into x and z planes of
 * num_data bits each. */
HLDSIM_API hldsim_status hldsim_decode(const hldsim_decoder* decoder, const uint8_t* syndrome,
                                       size_t n_syndrome, uint8_t* x, uint8_t* z, size_t n_data);

typedef struct hldsim_benchmark_point {
  double eps_p;
  double eps_l;
  int64_t shots;
  int64_t failures;
  double variance;
} hldsim_benchmark_point;

HLDSIM_API hldsim_status hldsim_benchmark(const hldsim_decoder* decoder, const double* eps,
                                          size_t n_eps, int64_t shots, uint64_t seed, int threads,
                                          hldsim_failure_mode mode, hldsim_benchmark_point* out);
HLDSIM_API hldsim_status hldsim_log_spaced(double lo, double hi, int n, double* out);

HLDSIM_API hldsim_status hldsim_pseudo_threshold(const hldsim_benchmark_point* points, size_t n,
                                                 double* p_th, double* ci_low, double* ci_high);

typedef struct hldsim_fit_result {
  double p_th;
  double s;
  double c;
  double residual;
  int evaluations;
  int converged;
} hldsim_fit_result;

/* Returns HLDSIM_ERR_NOT_CONVERGED with the best parameters filled in when
 * the optimizer fails. */
HLDSIM_API hldsim_status hldsim_fit(const hldsim_benchmark_point* points, size_t n,
                                    hldsim_fit_result* out);

/* ---- hardware cost ---- */

typedef struct hldsim_cost {
  int64_t pp_bits;
  int64_t fa_count;
  int64_t tree_depth;
  int64_t nl_bitops;
  int64_t nl_depth;
  int64_t bitops;
} hldsim_cost;

HLDSIM_API hldsim_status hldsim_node_cost(int m, int bits, hldsim_transfer transfer,
                                          hldsim_node_kind kind, hldsim_cost* out);
/* `layers`, if non-NULL, receives the three per-layer totals (hidden 1,
 * hidden 2, output). cfg->bits must be set. */
HLDSIM_API hldsim_status hldsim_network_cost(const hldsim_network_config* cfg, hldsim_cost* total,
                                             hldsim_cost* layers);
/* Writes the ascending indices of the non-dominated points into out_idx
 * (capacity n) and their count into *out_n. */
HLDSIM_API hldsim_status hldsim_pareto_front(const double* cost, const double* performance,
                                             size_t n, size_t* out_idx, size_t* out_n);

#ifdef __cplusplus
}
#endif

#endif /* HLDSIM_HLDSIM_H_ */
