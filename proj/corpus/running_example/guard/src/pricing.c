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

#include "pricing.h"

#include "bdci_trace.h"

int getTotalPrice(int price, int quantity) {
  BDCI_ENTER2(getTotalPrice, price, quantity);
  int total = price * quantity;
  total += total * TAX_RATE / 100;
  BDCI_EXIT2(getTotalPrice, total, price, quantity);
  return total;
}

int getDiscountedPrice(int price, int discount) {
  BDCI_ENTER2(getDiscountedPrice, price, discount);
  int discounted = price - price * discount / 100;
  BDCI_EXIT2(getDiscountedPrice, discounted, price, discount);
  return discounted;
}

int getSaving(int price, int quantity, int discount) {
  BDCI_ENTER3(getSaving, price, quantity, discount);
  int total = 0;
  int discounted;
  /* *** BEGIN CHANGE *** */
  if (quantity > 0) total = getTotalPrice(price, quantity);
  discounted = total;
  if (discount < 1000) discounted = getDiscountedPrice(total, discount);
  /* *** END CHANGE *** */
  int saving = total - discounted;
  BDCI_EXIT3(getSaving, saving, price, quantity, discount);
  return saving;
}
