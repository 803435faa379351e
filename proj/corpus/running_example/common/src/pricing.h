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

#ifndef PRICING_H_
#define PRICING_H_

#define TAX_RATE 10

int getTotalPrice(int price, int quantity);
int getDiscountedPrice(int price, int discount);
int getSaving(int price, int quantity, int discount);

#endif  // PRICING_H_
