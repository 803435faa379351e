// Copyright 2026 The BDCI Authors
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

// Tiny tracing shim for the pricing corpus. Compiled in only with
// -DBDCI_TRACE; otherwise every macro expands to nothing.
//
// Environment:
//   BDCI_TRACE_DIR  directory receiving trace-<pid>.trace (tracing is off
//                   when unset)
//   BDCI_LABEL      source label written on the `L` line
//   BDCI_POINTS     optional file listing <function>_ENTER / _EXIT names;
//                   functions not listed are not traced

#ifndef BDCI_TRACE_SHIM_H_
#define BDCI_TRACE_SHIM_H_

#ifdef BDCI_TRACE

#include <stdarg.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <unistd.h>

static FILE* bdci_out;
static int bdci_ready;
static char bdci_points[64][128];
static int bdci_point_count = -1;  // -1: no filter
static unsigned long bdci_next_id;

static void bdci_init(void) {
  const char* dir;
  const char* points;
  const char* label;
  char path[4096];
  bdci_ready = 1;
  dir = getenv("BDCI_TRACE_DIR");
  if (dir == NULL || *dir == '\0') return;
  points = getenv("BDCI_POINTS");
  if (points != NULL && *points != '\0') {
    FILE* in = fopen(points, "r");
    char line[128];
    bdci_point_count = 0;
    while (in != NULL && bdci_point_count < 64 &&
           fgets(line, sizeof line, in) != NULL) {
      line[strcspn(line, "\r\n")] = '\0';
      if (line[0] == '\0') continue;
      strcpy(bdci_points[bdci_point_count++], line);
    }
    if (in != NULL) fclose(in);
  }
  snprintf(path, sizeof path, "%s/trace-%ld.trace", dir, (long)getpid());
  bdci_out = fopen(path, "w");
  if (bdci_out == NULL) return;
  fputs("# bdci trace v1\n", bdci_out);
  label = getenv("BDCI_LABEL");
  if (label != NULL && *label != '\0') fprintf(bdci_out, "L %s\n", label);
}

static int bdci_wanted(const char* fn) {
  char enter[160];
  char exit_name[160];
  int i;
  if (!bdci_ready) bdci_init();
  if (bdci_out == NULL) return 0;
  if (bdci_point_count < 0) return 1;
  snprintf(enter, sizeof enter, "%s_ENTER", fn);
  snprintf(exit_name, sizeof exit_name, "%s_EXIT", fn);
  for (i = 0; i < bdci_point_count; ++i) {
    if (strcmp(bdci_points[i], enter) == 0 ||
        strcmp(bdci_points[i], exit_name) == 0) {
      return 1;
    }
  }
  return 0;
}

// Writes one block. The variadic part is `count` (name, long long) pairs.
static void bdci_block(const char* fn, const char* kind, unsigned long id,
                       const long long* ret, int count, ...) {
  va_list args;
  int i;
  fprintf(bdci_out, "PP %s %s %lu\n", fn, kind, id);
  if (ret != NULL) fprintf(bdci_out, "V return int %lld\n", *ret);
  va_start(args, count);
  for (i = 0; i < count; ++i) {
    const char* name = va_arg(args, const char*);
    long long value = va_arg(args, long long);
    fprintf(bdci_out, "V %s int %lld\n", name, value);
  }
  va_end(args);
  fputs("EE\n", bdci_out);
  fflush(bdci_out);
}

static unsigned long bdci_enter_id(const char* fn) {
  return bdci_wanted(fn) ? ++bdci_next_id : 0;
}

// Parameters are snapshotted on entry so EXIT reports entry-time values.
#define BDCI_ENTER2(fn, a, b)                                        \
  long long bdci_a = (a), bdci_b = (b);                              \
  unsigned long bdci_id = bdci_enter_id(#fn);                        \
  if (bdci_id) bdci_block(#fn, "ENTER", bdci_id, NULL, 2, #a, bdci_a, \
                          #b, bdci_b)
#define BDCI_EXIT2(fn, r, a, b)                                           \
  do {                                                                    \
    long long bdci_r = (r);                                               \
    if (bdci_id) bdci_block(#fn, "EXIT", bdci_id, &bdci_r, 2, #a, bdci_a, \
                            #b, bdci_b);                                  \
  } while (0)
#define BDCI_ENTER3(fn, a, b, c)                                          \
  long long bdci_a = (a), bdci_b = (b), bdci_c = (c);                     \
  unsigned long bdci_id = bdci_enter_id(#fn);                             \
  if (bdci_id) bdci_block(#fn, "ENTER", bdci_id, NULL, 3, #a, bdci_a, #b, \
                          bdci_b, #c, bdci_c)
#define BDCI_EXIT3(fn, r, a, b, c)                                        \
  do {                                                                    \
    long long bdci_r = (r);                                               \
    if (bdci_id) bdci_block(#fn, "EXIT", bdci_id, &bdci_r, 3, #a, bdci_a, \
                            #b, bdci_b, #c, bdci_c);                      \
  } while (0)

#else

#define BDCI_ENTER2(fn, a, b)
#define BDCI_EXIT2(fn, r, a, b)
#define BDCI_ENTER3(fn, a, b, c)
#define BDCI_EXIT3(fn, r, a, b, c)

#endif  // BDCI_TRACE

#endif  // BDCI_TRACE_SHIM_H_
