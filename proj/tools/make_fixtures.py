#!/usr/bin/env python3
"""Regenerates the synthetic fixtures under data/. Output is deterministic."""

import csv
import json
import math
import os
import random
import shutil
import sys

import numpy as np
from PIL import Image
from scipy.ndimage import gaussian_filter

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data")

PCF_COLUMNS = ["company", "category", "name", "reported_cf_kgco2e", "reported_uncertainty",
               "stage_manufacturing", "stage_transport", "stage_use", "stage_eol"]
PRODUCT_ATTRS = ["cpu_vendor", "technology_node_nm", "memory_gb", "storage_gb",
                 "screen_size_in", "gpu_class", "battery_wh", "weight_kg"]
GRID_SOURCES = ["nuclear", "wind", "hydro", "solar", "coal", "gas", "oil", "biomass",
                "geothermal", "battery_discharge", "unknown"]


def path(*parts):
    p = os.path.join(ROOT, *parts)
    os.makedirs(os.path.dirname(p), exist_ok=True)
    return p


def fmt(x):
    return repr(round(x, 6)) if isinstance(x, float) else str(x)


# --------------------------------------------------------------------- PCF

def product_row(rng, company, category, name, cf=None):
    shares = [rng.uniform(0.5, 0.8), rng.uniform(0.02, 0.08)]
    shares.append(rng.uniform(0.1, 1.0 - sum(shares) - 0.01))
    shares.append(1.0 - sum(shares))
    shares = [round(s, 6) for s in shares[:3]]
    shares.append(round(1.0 - sum(shares), 6))
    cf = cf if cf is not None else round(rng.uniform(150, 900), 1)
    return [company, category, name, fmt(cf), fmt(round(cf * 0.15, 1))] + [fmt(s) for s in shares]


def product_features(rng, missing=0.0):
    vals = [rng.choice(["intel", "amd", "apple", "qualcomm"]),
            rng.choice([3, 5, 7, 10, 14]),
            rng.choice([8, 16, 32, 64]),
            rng.choice([256, 512, 1024, 2048]),
            round(rng.uniform(6, 17), 1),
            rng.choice(["integrated", "discrete"]),
            round(rng.uniform(40, 99), 1),
            round(rng.uniform(0.9, 2.6), 2)]
    return ["" if rng.random() < missing else fmt(v) for v in vals]


def write_pcf():
    rng = random.Random(11)
    rows = []
    names = ["XPS 13", "XPS 15", "XPS 17", "Latitude 5440", "Latitude 7440", "Precision 3581",
             "Inspiron 14", "Inspiron 16", "Vostro 3520", "Alienware m16", "G15 5530"]
    for n in names:
        cf = 450.0 if n == "XPS 17" else None
        rows.append(product_row(rng, "Dell", "laptop", n, cf) + product_features(rng, 0.1))
    # The malformed row: reported footprint of zero.
    rows.insert(6, product_row(rng, "Dell", "laptop", "Latitude 3000 (withdrawn)", 0.0) +
                product_features(rng))
    with open(path("pcf", "dell_laptops.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(PCF_COLUMNS + PRODUCT_ATTRS)
        w.writerows(rows)

    rng = random.Random(12)
    rows = []
    for i in range(14):
        rows.append(product_row(rng, "Lenovo", "laptop", f"ThinkPad T{14 + i}") +
                    product_features(rng, 0.15))
    # Three near-duplicate models that share every feature with a sibling.
    for src, name in [(0, "ThinkPad T14 Gen 2b"), (3, "ThinkPad T17 AMD"), (9, "ThinkPad T23s")]:
        twin = product_row(rng, "Lenovo", "laptop", name) + rows[src][len(PCF_COLUMNS):]
        rows.append(twin)
    rows.insert(5, product_row(rng, "Lenovo", "laptop", "ThinkPad X1") + product_features(rng))
    rows.insert(11, product_row(rng, "Lenovo", "laptop", "ThinkPad X13") + product_features(rng))
    rows.append(product_row(rng, "Lenovo", "laptop", "ThinkPad Z13") + product_features(rng))
    assert len(rows) == 20
    with open(path("pcf", "dedup_laptops.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(PCF_COLUMNS + PRODUCT_ATTRS)
        w.writerows(rows)


# -------------------------------------------------------------------- grid

SOURCE_INTENSITY = [12, 11, 24, 45, 820, 490, 650, 230, 38, 300, 450]


def random_mix(rng):
    w = [rng.gammavariate(0.6, 1.0) for _ in GRID_SOURCES]
    total = sum(w)
    shares = [round(x / total, 6) for x in w]
    shares[-1] = round(1.0 - sum(shares[:-1]), 6)
    if shares[-1] < 0:
        shares[0] += shares[-1]
        shares[-1] = 0.0
    return shares


def write_grid():
    rng = random.Random(21)
    rows = []
    for i in range(348):
        shares = random_mix(rng)
        ci = sum(s * c for s, c in zip(shares, SOURCE_INTENSITY)) * (1 + rng.gauss(0, 0.05))
        cells = [fmt(s) for s in shares]
        if i == 17:
            for j in (3, 8, 9):
                cells[j] = ""
        rows.append([f"R{i:04d}", "2024-07-01", fmt(round(max(ci, 1.0), 3))] + cells)
    with open(path("grid", "regions_2024.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["region", "date", "carbon_intensity_g_per_kwh"] + GRID_SOURCES)
        w.writerows(rows)

    rng = random.Random(22)
    rows = []
    sums = {}
    for r in ["DE", "FR", "NO", "PL", "US-CAL"]:
        base = random_mix(rng)
        for day in range(1, 32):
            ci = round(sum(s * c for s, c in zip(base, SOURCE_INTENSITY)) *
                       (1 + rng.uniform(-0.2, 0.2)), 2)
            rows.append([r, f"2024-01-{day:02d}", fmt(ci)] + [fmt(s) for s in base])
            sums.setdefault(r, []).append(ci)
    rng.shuffle(rows)
    with open(path("grid", "daily_jan_2024.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["region", "date", "carbon_intensity_g_per_kwh"] + GRID_SOURCES)
        w.writerows(rows)
    expected = {r: math.fsum(v) / len(v) for r, v in sums.items()}
    with open(path("grid", "daily_jan_2024_means.json"), "w") as f:
        json.dump(expected, f, indent=2, sort_keys=True)
        f.write("\n")


# --------------------------------------------------------------- materials

CATEGORIES = {
    # elemental category: (base kgCO2e/g, melting K range, density range, phase, words)
    "alkali metal": (0.009, (300, 460), (500, 1900), "solid", ["lithium", "sodium", "alkali"]),
    "transition metal": (0.006, (1500, 3700), (4500, 21000), "solid",
                         ["steel", "copper", "nickel", "titanium", "cobalt"]),
    "post-transition metal": (0.011, (500, 950), (2700, 11300), "solid",
                              ["aluminium", "tin", "lead", "zinc"]),
    "metalloid": (0.045, (900, 1700), (2300, 6700), "solid", ["silicon", "germanium", "boron"]),
    "polymer": (0.0028, (380, 600), (900, 2200), "solid",
                ["polyethylene", "polycarbonate", "polyamide", "abs"]),
    "ceramic": (0.0016, (1800, 3200), (2200, 6000), "solid", ["alumina", "zirconia", "glass"]),
    "noble gas": (0.0004, (20, 170), (1, 6), "gas", ["argon", "neon", "xenon"]),
    "halogen": (0.0022, (50, 400), (2, 3200), "liquid", ["chlorine", "bromine", "fluorine"]),
    "wood": (0.0003, (500, 700), (350, 900), "solid", ["oak", "pine", "birch", "plywood"]),
}
FORMS = ["ingot", "sheet", "powder", "granulate", "film", "wire", "pellet", "board"]


def write_materials():
    rng = random.Random(31)
    entries = []
    cats = list(CATEGORIES)
    for i in range(90):
        cat = cats[i % len(cats)]
        base, mp, dens, phase, words = CATEGORIES[cat]
        m = rng.uniform(*mp)
        d = math.exp(rng.uniform(math.log(dens[0]), math.log(dens[1])))
        mrel = (m - mp[0]) / (mp[1] - mp[0])
        drel = (math.log(d) - math.log(dens[0])) / (math.log(dens[1]) - math.log(dens[0]))
        ef = base * math.exp(1.2 * (mrel - 0.5) + 0.8 * (drel - 0.5) + rng.gauss(0, 0.08))
        desc = f"{rng.choice(words)} {rng.choice(FORMS)}, grade {rng.choice('ABCDEFGH')}{i % 7}"
        isic = {"polymer": "2013", "wood": "1610", "ceramic": "2392"}.get(cat, "2420")
        entries.append({
            "id": f"MAT{i:03d}",
            "description": desc,
            "isic_class": isic,
            "unit": "gram",
            "kgco2e_per_unit": round(ef, 8),
            "features": {
                "schema": [{"name": "melting_point_K", "kind": "numeric"},
                           {"name": "phase_at_stp", "kind": "categorical"},
                           {"name": "elemental_category", "kind": "categorical"},
                           {"name": "density_kg_m3", "kind": "numeric"}],
                "values": {"melting_point_K": round(m, 2), "phase_at_stp": phase,
                           "elemental_category": cat, "density_kg_m3": round(d, 2)},
            },
        })
    with open(path("efdb", "materials_90.jsonl"), "w") as f:
        for e in entries:
            f.write(json.dumps(e, sort_keys=True) + "\n")


COMPONENT_EFS = [
    # id, description, isic, unit, kgCO2e per unit
    ("EF-PCB-8L", "printed circuit board, 8-layer, FR-4", "2610", "mm2", 0.00042),
    ("EF-PCB-4L", "printed circuit board, 4-layer, FR-4", "2610", "mm2", 0.00024),
    ("EF-PCB-12L", "printed circuit board, 12-layer, HDI", "2610", "mm2", 0.00065),
    ("EF-IC-SOC", "application processor system on chip", "2610", "count", 9.8),
    ("EF-IC-DRAM", "LPDDR DRAM memory package", "2610", "count", 4.1),
    ("EF-IC-NAND", "NAND flash storage package", "2610", "count", 6.3),
    ("EF-IC-PMIC", "power management integrated circuit", "2610", "count", 0.85),
    ("EF-IC-RF", "radio frequency transceiver module", "2610", "count", 1.7),
    ("EF-IC-GPU", "graphics processor die with HBM", "2610", "count", 21.0),
    ("EF-IC-CTRL", "embedded microcontroller unit", "2610", "count", 0.42),
    ("EF-SEN-CAM", "CMOS camera module with lens stack", "2610", "count", 1.9),
    ("EF-SEN-IMU", "MEMS accelerometer and gyroscope", "2610", "count", 0.21),
    ("EF-SEN-FP", "capacitive fingerprint sensor", "2610", "count", 0.33),
    ("EF-SEN-AMB", "ambient light and proximity sensor", "2610", "count", 0.12),
    ("EF-PAS-MLCC", "multilayer ceramic capacitor, 0402", "2610", "count", 0.0021),
    ("EF-PAS-RES", "thick film chip resistor, 0201", "2610", "count", 0.0009),
    ("EF-PAS-IND", "power inductor, shielded", "2610", "count", 0.011),
    ("EF-MEC-AL", "aluminium enclosure, machined", "2599", "gram", 0.0185),
    ("EF-MEC-STEEL", "stainless steel bracket and screws", "2599", "gram", 0.0061),
    ("EF-MEC-GLASS", "chemically strengthened cover glass", "2310", "gram", 0.0029),
    ("EF-MEC-PC", "polycarbonate housing, injection moulded", "2220", "gram", 0.0051),
    ("EF-MEC-CU", "copper heat spreader", "2599", "gram", 0.0072),
    ("EF-BAT-LI", "lithium-ion battery pack", "2720", "gram", 0.0165),
    ("EF-DSP-OLED", "OLED display panel", "2610", "mm2", 0.00094),
    ("EF-DSP-LCD", "LCD display panel with backlight", "2610", "mm2", 0.00051),
    ("EF-GRID-EU", "electricity, medium voltage, European mix", "3510", "kWh", 0.28),
]


def write_component_efdb(p):
    with open(p, "w") as f:
        for eid, desc, isic, unit, ef in COMPONENT_EFS:
            f.write(json.dumps({"id": eid, "description": desc, "isic_class": isic,
                                "unit": unit, "kgco2e_per_unit": ef}, sort_keys=True) + "\n")


# ------------------------------------------------------------------ images

def save_png(arr, p):
    Image.fromarray(np.clip(arr, 0, 255).astype(np.uint8), mode="L").save(path(p))


def write_texture_images():
    n = 512
    save_png(np.full((n, n), 128.0), "images/flat_panel.png")
    yy, xx = np.mgrid[0:n, 0:n]
    save_png(np.where(((yy // 64) + (xx // 64)) % 2 == 0, 200.0, 56.0), "images/checker_coarse.png")
    save_png(np.where(((yy // 2) + (xx // 2)) % 2 == 0, 200.0, 56.0), "images/checker_fine.png")
    rng = np.random.default_rng(41)
    save_png(rng.uniform(0, 255, (n, n)), "images/dense_texture.png")


BOARD_COMPONENTS = [
    # x, y, w, h in mm on a 120 x 60 mm board; the 14 mm SoC is the largest part
    (10, 8, 14, 14), (30, 8, 10, 8), (44, 8, 9, 9), (60, 10, 8, 6), (76, 8, 12, 10),
    (95, 10, 16, 4),  # elongated: sensor strip
    (12, 36, 3, 1.5), (18, 36, 3, 1.5), (24, 36, 3, 1.5), (40, 34, 11, 9),
    (62, 38, 3, 1.5), (80, 36, 9, 12),
]


def render_board(mm_per_px, canvas, origin, noise_seed, components=BOARD_COMPONENTS,
                 board_mm=(120, 60)):
    rng = np.random.default_rng(noise_seed)
    h, w = canvas
    img = np.full((h, w), 35.0) + rng.normal(0, 3, (h, w))
    ox, oy = origin
    bw, bh = round(board_mm[0] / mm_per_px), round(board_mm[1] / mm_per_px)
    img[oy:oy + bh, ox:ox + bw] = 185.0 + rng.normal(0, 3, (bh, bw))
    for x, y, cw, ch in components:
        px, py = ox + round(x / mm_per_px), oy + round(y / mm_per_px)
        pw, ph = round(cw / mm_per_px), round(ch / mm_per_px)
        img[py:py + ph, px:px + pw] = 45.0 + rng.normal(0, 3, (ph, pw))
    return img, (ox, oy, bw, bh)


def write_board_images():
    # 0.2 mm/px: board 600 x 300 px on an 800 x 450 canvas.
    img, board = render_board(0.2, (450, 800), (100, 75), 51)
    save_png(img, "images/board_full.png")
    # Zoomed corner: the top-left 36 x 24 mm of the board at 0.08 mm/px.
    zoom_parts = [(10, 8, 14, 14), (26, 6, 5, 8), (4, 18, 3, 2)]
    zimg, _ = render_board(0.08, (300, 450), (0, 0), 52, zoom_parts, (36, 24))
    save_png(zimg, "images/board_zoom.png")
    # Battery photo: one softly lit bright slab, no dark parts.
    rng = np.random.default_rng(54)
    bat = np.full((400, 600), 150.0)
    bat[60:340, 80:520] += 65.0
    bat = gaussian_filter(bat, 20) + rng.normal(0, 2, bat.shape)
    save_png(bat, "images/battery.png")
    # Calibration board: 0.25 mm/px, 120 x 60 mm board, 15 mm reference chip.
    cal_parts = [(10, 10, 15, 15), (40, 12, 8, 8), (60, 30, 10, 6), (90, 20, 2, 1)]
    cimg, cboard = render_board(0.25, (400, 640), (80, 80), 53, cal_parts)
    save_png(cimg, "images/calibration_board.png")
    with open(path("images", "calibration_board.json"), "w") as f:
        json.dump({"mm_per_px": 0.25, "board_w_mm": 120.0, "board_h_mm": 60.0,
                   "board_bbox_px": list(cboard), "reference": {"label": "", "known_w_mm": 15.0,
                                                                "known_h_mm": 15.0}},
                  f, indent=2)
        f.write("\n")
    with open(path("images", "board_full.json"), "w") as f:
        json.dump({"mm_per_px": 0.2, "board_bbox_px": list(board), "components": 12},
                  f, indent=2)
        f.write("\n")


# ------------------------------------------------------------- agent suite

CATALOG = {
    "PCB": [("printed circuit board, 8-layer, FR-4", "mm2", (6000, 14000)),
            ("printed circuit board, 4-layer, FR-4", "mm2", (3000, 9000))],
    "IC": [("application processor system on chip", "count", (1, 1)),
           ("LPDDR DRAM memory package", "count", (1, 4)),
           ("NAND flash storage package", "count", (1, 2)),
           ("power management integrated circuit", "count", (1, 3)),
           ("radio frequency transceiver module", "count", (1, 2)),
           ("embedded microcontroller unit", "count", (1, 3))],
    "sensor": [("CMOS camera module with lens stack", "count", (1, 4)),
               ("MEMS accelerometer and gyroscope", "count", (1, 1)),
               ("capacitive fingerprint sensor", "count", (1, 1)),
               ("ambient light and proximity sensor", "count", (1, 2))],
    "passive": [("multilayer ceramic capacitor, 0402", "count", (200, 900)),
                ("thick film chip resistor, 0201", "count", (100, 600)),
                ("power inductor, shielded", "count", (5, 30))],
    "mechanical": [("aluminium enclosure, machined", "gram", (20, 400)),
                   ("stainless steel bracket and screws", "gram", (5, 60)),
                   ("chemically strengthened cover glass", "gram", (10, 40)),
                   ("polycarbonate housing, injection moulded", "gram", (30, 300)),
                   ("copper heat spreader", "gram", (5, 80))],
    "battery": [("lithium-ion battery pack", "gram", (30, 300))],
    "display": [("OLED display panel", "mm2", (8000, 30000)),
                ("LCD display panel with backlight", "mm2", (20000, 200000))],
}
EF_BY_DESC = {desc: ef for _, desc, _, _, ef in COMPONENT_EFS}

PRODUCTS = [
    ("iPhone 12 Pro", "smartphone"), ("iPhone 13 mini", "smartphone"), ("Pixel 7", "smartphone"),
    ("Galaxy S21", "smartphone"), ("Fairphone 4", "smartphone"), ("iPad Air", "tablet"),
    ("Galaxy Tab S8 tablet", "tablet"), ("MacBook Air M2", "laptop"),
    ("ThinkPad X1 Carbon", "laptop"), ("XPS 13", "laptop"), ("Apple Watch Series 8", "wearable"),
    ("Dell U2723QE monitor", "monitor"), ("LG UltraFine display", "monitor"),
    ("ROG STRIX Z790-A", "motherboard"), ("MSI B650 Tomahawk", "motherboard"),
    ("GeForce RTX 4070", "gpu"), ("Radeon RX 7800 XT", "gpu"), ("OptiPlex 7010 desktop", "desktop"),
    ("Sonos One speaker", "electronics"), ("Kindle Paperwhite", "electronics"),
]
REQUIRED = {"PCB": ("layer_count", None), "battery": ("capacity_wh", None),
            "display": ("display_type", None)}


def da_for(product_class):
    classes = ["PCB", "IC", "sensor", "passive", "mechanical"]
    required = {"PCB": ["layer_count"]}
    if product_class in ("smartphone", "tablet", "laptop", "wearable"):
        classes.append("battery")
        required["battery"] = ["capacity_wh"]
    if product_class in ("smartphone", "tablet", "laptop", "wearable", "monitor"):
        classes.append("display")
        required["display"] = ["display_type"]
    return {"product_class": product_class, "component_classes": classes,
            "required_attributes": required}


def entry_line(e):
    attrs = "; ".join(f"{k}={v}" for k, v in e["attributes"].items())
    return f"entry {e['component_class']} | {e['description']} | {fmt(e['quantity'])} | " \
           f"{e['unit']} | {attrs}"


def pick_entries(rng, cls, n):
    options = rng.sample(CATALOG[cls], min(n, len(CATALOG[cls])))
    out = []
    for desc, unit, (lo, hi) in options:
        q = float(rng.randint(lo, hi)) if unit == "count" else round(rng.uniform(lo, hi), 1)
        out.append({"component_class": cls, "description": desc, "quantity": q, "unit": unit,
                    "attributes": {}})
    return out


def write_suite(root):
    rng = random.Random(61)
    corpus_dir = os.path.join(root, "corpus")
    cases = []
    docs = []
    for pi, (name, pclass) in enumerate(PRODUCTS):
        key = name.lower()
        slug = f"p{pi:02d}"
        da = da_for(pclass)
        reference = []
        # Products cycle through chain depths 0..3 of reference chains.
        depth = pi % 4
        for cls in da["component_classes"]:
            n = 1 if cls in ("PCB", "battery", "display") else rng.randint(2, 4)
            entries = pick_entries(rng, cls, n)
            if cls == "PCB":
                entries[0]["attributes"]["layer_count"] = rng.choice([4, 6, 8, 10])
            if cls == "battery":
                entries[0]["attributes"]["capacity_wh"] = round(rng.uniform(10, 99), 1)
            if cls == "display":
                entries[0]["attributes"]["display_type"] = \
                    "OLED" if entries[0]["description"].startswith("OLED") else "LCD"
            reference.extend(entries)

            chain = depth if cls in ("IC", "mechanical") and len(entries) > depth else 0
            head = entries[:len(entries) - chain]
            tail = entries[len(entries) - chain:]
            lines = [f"{name} teardown notes: {cls} components."]
            for e in head:
                shown = dict(e)
                if cls in REQUIRED:
                    shown = dict(e, attributes={})
                lines.append(entry_line(shown))
            if tail:
                lines.append(f"ref {cls} | further {cls} parts in the supplier list | {slug}-{cls}-s1")
            docs.append({"doc_id": f"{slug}-{cls.lower()}", "query_keys": [f"{key}|{cls.lower()}"],
                         "modality": "text", "payload": "\n".join(lines) + "\n"})
            for step, e in enumerate(tail, start=1):
                lines = [f"Supplier list {step} for {name}.", f"resolves {slug}-{cls}-s{step}",
                         entry_line(e)]
                if step < len(tail):
                    lines.append(f"ref {cls} | remaining {cls} parts | {slug}-{cls}-s{step + 1}")
                docs.append({"doc_id": f"{slug}-{cls.lower()}-s{step}",
                             "query_keys": [f"{slug}-{cls}-s{step}".lower()],
                             "modality": "text", "payload": "\n".join(lines) + "\n"})
            if cls in REQUIRED:
                attr = REQUIRED[cls][0]
                value = entries[0]["attributes"][attr]
                docs.append({"doc_id": f"{slug}-{cls.lower()}-{attr}",
                             "query_keys": [f"{key}|{cls.lower()}|{attr}"], "modality": "text",
                             "payload": f"Specification sheet of {name}.\nattr {cls} | {attr} = "
                                        f"{value}\n"})
            # A second text document per class that the critic never needs.
            docs.append({"doc_id": f"{slug}-{cls.lower()}-z-review",
                         "query_keys": [f"{key}|{cls.lower()}"], "modality": "text",
                         "payload": f"Press review of the {name}. The {cls} parts look solid.\n"})
        co2e = math.fsum(e["quantity"] * EF_BY_DESC[e["description"]] for e in reference)
        cases.append({"query": name,
                      "reference": {"product": name, "da": da, "entries": reference,
                                    "provenance": ["reference"] * len(reference)},
                      "reference_co2e": co2e})
    if os.path.isdir(corpus_dir):
        shutil.rmtree(corpus_dir)
    os.makedirs(corpus_dir)
    for d in docs:
        with open(os.path.join(corpus_dir, d["doc_id"] + ".json"), "w") as f:
            json.dump(d, f, indent=2)
            f.write("\n")
    write_component_efdb(os.path.join(root, "efdb.jsonl"))
    with open(os.path.join(root, "suite.json"), "w") as f:
        json.dump({"corpus": "corpus", "efdb": "efdb.jsonl", "cases": cases}, f, indent=1)
        f.write("\n")


def write_image_corpus(root):
    """A small corpus whose IC, sensor and passive answers are teardown photos."""
    if os.path.isdir(root):
        shutil.rmtree(root)
    os.makedirs(root)
    name, key = "Board Phone X", "board phone x"
    docs = []
    for img in ["board_full", "board_zoom", "battery"]:
        shutil.copy(os.path.join(ROOT, "images", img + ".png"), os.path.join(root, img + ".png"))
        docs.append({"doc_id": f"img-{img.replace('_', '-')}", "query_keys": [f"{key}|ic"],
                     "modality": "image", "payload_file": img + ".png",
                     "reference": {"label": "", "known_w_mm": 14.0, "known_h_mm": 14.0}})
    text = {
        "pcb": "The board is documented in the teardown photos.\n",
        "pcb-layers": "attr PCB | layer_count = 8\n",
        "battery": "entry battery | lithium-ion battery pack | 48 | gram | capacity_wh=15.2\n",
        "display": "entry display | OLED display panel | 9800 | mm2 | display_type=OLED\n",
        "mechanical": "entry mechanical | aluminium enclosure, machined | 60 | gram\n",
    }
    for cls, payload in text.items():
        k = f"{key}|pcb|layer_count" if cls == "pcb-layers" else f"{key}|{cls}"
        docs.append({"doc_id": f"txt-{cls}", "query_keys": [k], "modality": "text",
                     "payload": f"{name} notes.\n{payload}"})
    for d in docs:
        with open(os.path.join(root, d["doc_id"] + ".json"), "w") as f:
            json.dump(d, f, indent=2)
            f.write("\n")


# ------------------------------------------------------------------- demo

def write_demo():
    rng = random.Random(71)
    schema = [{"name": "technology_node_nm", "kind": "numeric"},
              {"name": "memory_gb", "kind": "numeric"},
              {"name": "storage_gb", "kind": "numeric"},
              {"name": "screen_size_in", "kind": "numeric"},
              {"name": "cpu_vendor", "kind": "categorical"},
              {"name": "weight_kg", "kind": "numeric"}]
    rows = []
    for i in range(40):
        node = rng.choice([5, 7, 10, 14])
        mem = rng.choice([8, 16, 32])
        sto = rng.choice([256, 512, 1024])
        scr = round(rng.uniform(13, 17), 1)
        w = round(0.9 + 0.1 * scr + rng.uniform(-0.2, 0.2), 2)
        cf = round(120 + 4 * mem + 0.08 * sto + 12 * (scr - 13) + 300 / node +
                   rng.gauss(0, 15), 1)
        vals = {"technology_node_nm": node, "memory_gb": mem, "storage_gb": sto,
                "screen_size_in": scr, "cpu_vendor": rng.choice(["intel", "amd"]),
                "weight_kg": w}
        for k in list(vals):
            if rng.random() < 0.1:
                vals[k] = None
        rows.append({"id": f"ASUS/Zenbook {i:02d}", "values": vals, "target": cf})
    norm = []
    for spec in schema:
        name = spec["name"]
        xs = [r["values"][name] for r in rows if r["values"][name] is not None]
        if spec["kind"] == "categorical" or not xs:
            norm.append({"name": name, "mean": 0.0, "std": 1.0})
            continue
        mean = math.fsum(xs) / len(xs)
        std = math.sqrt(math.fsum((x - mean) ** 2 for x in xs) / len(xs))
        norm.append({"name": name, "mean": mean, "std": std if std > 0 else 1.0})
    with open(path("demo", "index.json"), "w") as f:
        json.dump({"category": "laptop", "schema": schema, "records": rows,
                   "normalization": norm}, f, indent=1)
        f.write("\n")
    query = {"schema": schema, "values": {"technology_node_nm": 7, "memory_gb": 16,
                                          "storage_gb": 512, "screen_size_in": 14.0,
                                          "cpu_vendor": "intel", "weight_kg": None}}
    with open(path("demo", "query.json"), "w") as f:
        json.dump(query, f, indent=1)
        f.write("\n")
    with open(path("demo", "estimate_k5.json"), "w") as f:
        json.dump(knn_oracle(schema, norm, rows, query["values"], 5), f, indent=1)
        f.write("\n")


def knn_oracle(schema, norm, rows, query, k):
    """Straight-line weighted-Gaussian kNN over mutually present features."""
    d = len(schema)
    scored = []
    for r in rows:
        ss, shared = 0.0, 0
        for spec, st in zip(schema, norm):
            a, b = query[spec["name"]], r["values"][spec["name"]]
            if a is None or b is None:
                continue
            shared += 1
            if spec["kind"] == "categorical":
                ss += 0.0 if a == b else 1.0
            else:
                ss += ((a - st["mean"]) / st["std"] - (b - st["mean"]) / st["std"]) ** 2
        if shared == 0:
            continue
        present = sum(v is not None for v in r["values"].values())
        scored.append((math.sqrt(ss) * math.sqrt(d / shared), r["id"],
                       max(present / d, 1.0 / d), r["target"]))
    scored.sort(key=lambda t: (t[0], t[1]))
    top = scored[:k]
    wsum = math.fsum(t[2] for t in top)
    mean = math.fsum(t[2] * t[3] for t in top) / wsum
    std = math.sqrt(math.fsum(t[2] * (t[3] - mean) ** 2 for t in top) / wsum)
    return {"mean": mean, "std": std, "ci95": [mean - 1.96 * std, mean + 1.96 * std],
            "neighbors": [{"id": t[1], "distance": t[0], "weight": t[2]} for t in top],
            "method_tag": "knn-weighted-gaussian"}


def main():
    write_pcf()
    write_grid()
    write_materials()
    write_component_efdb(path("efdb", "components.jsonl"))
    write_texture_images()
    write_board_images()
    write_suite(os.path.join(ROOT, "suite"))
    write_image_corpus(os.path.join(ROOT, "image_corpus"))
    write_demo()
    return 0


if __name__ == "__main__":
    sys.exit(main())
