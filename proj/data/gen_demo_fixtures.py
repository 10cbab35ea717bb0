#!/usr/bin/env python3
"""Regenerates the shipped demo fixtures in this directory.

Writes: scene_campus.json, route_42.csv, params_default.json,
params_validation.json, panorama_demo.ppm, refs_demo.csv, labels_demo.csv.

The panorama is a synthetic annotated equirectangular image: foliage areas
are tinted with the annotation reference color (63, 71, 204) plus jitter, a
neighboring sign/sky band gets a separable variant of the same tint, and
everything else stays outside the prefilter radius. The camera pose is
(87.3, 3.6, 104.1) degrees z-y-z, so the reference points exercise the pose
solver end to end.
"""

import json
import math
import os
import random
import struct

HERE = os.path.dirname(os.path.abspath(__file__))

POSE = (87.3, 3.6, 104.1)  # alpha_z1, alpha_y, alpha_z2, degrees
SIZE = 512                 # panorama width and height
REF_COLOR = (63, 71, 204)

# World-frame foliage band (degrees): trees along the road seen from a
# 16.6 m transmitter.
FOLIAGE_AZ = (15.0, 75.0)
FOLIAGE_EL = (-20.0, -2.0)
SIGN_EL = (0.0, 10.0)      # confusable annotation band above the horizon


def rot_z(deg):
    a = math.radians(deg)
    return [[math.cos(a), -math.sin(a), 0], [math.sin(a), math.cos(a), 0], [0, 0, 1]]


def rot_y(deg):
    a = math.radians(deg)
    return [[math.cos(a), 0, math.sin(a)], [0, 1, 0], [-math.sin(a), 0, math.cos(a)]]


def mat_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)] for i in range(3)]


def mat_apply(m, v):
    return [sum(m[i][k] * v[k] for k in range(3)) for i in range(3)]


def unit(az, el):
    az, el = math.radians(az), math.radians(el)
    return [math.cos(el) * math.cos(az), math.cos(el) * math.sin(az), math.sin(el)]


def angles(v):
    el = math.degrees(math.asin(max(-1.0, min(1.0, v[2]))))
    az = math.degrees(math.atan2(v[1], v[0]))
    return az, el


ROT = mat_mul(rot_z(POSE[2]), mat_mul(rot_y(POSE[1]), rot_z(POSE[0])))


def scene_campus():
    return {
        "frequency_hz": 220e9,
        "tx": {"x": 0.0, "y": 0.0, "z": 16.6},
        "buildings": [
            {"footprint": [[-30, -60], [-2, -60], [-2, 60], [-30, 60]], "height_m": 18.0},
            {"footprint": [[80, -120], [120, -120], [120, -60], [80, -60]], "height_m": 15.0},
            {"footprint": [[80, 40], [120, 40], [120, 100], [80, 100]], "height_m": 12.0},
            {"footprint": [[30, -80], [50, -80], [50, -50], [30, -50]], "height_m": 12.0},
            {"footprint": [[150, -30], [200, -30], [200, 20], [150, 20]], "height_m": 16.0},
            {"footprint": [[260, 60], [320, 60], [320, 120], [260, 120]], "height_m": 14.0},
            {"footprint": [[40, 120], [70, 120], [70, 160], [40, 160]], "height_m": 12.0},
        ],
    }


def state(ple, sf, kf_mu, ds_ns, asa, esa, clusters, cds, casa, cesa):
    return {
        "ple": ple,
        "sf_sigma_db": sf,
        "kf_mu_db": kf_mu,
        "kf_sigma_db": 4.0,
        "ds_median_ns": ds_ns,
        "ds_sigma_log10": 0.25,
        "asa_median_deg": asa,
        "asa_sigma_log10": 0.25,
        "esa_median_deg": esa,
        "esa_sigma_log10": 0.25,
        "mean_clusters": clusters,
        "cds_ns": cds,
        "casa_deg": casa,
        "cesa_deg": cesa,
    }


def params_default():
    return {
        "description": "220 GHz urban macrocell defaults. KF sigma and the "
                       "log-normal spread widths are assumed (4 dB, 0.25 decades); "
                       "the NLoS KF mean reuses the OLoS value.",
        "r_tau": 2.5,
        "states": {
            "los": state(1.93, 1.22, 13.09, 6.76, 9.77, 4.37, 2.12, 2.83, 1.72, 3.58),
            "olos": state(2.59, 7.06, 6.15, 22.9, 22.38, 5.50, 2.94, 3.95, 4.27, 4.01),
            "nlos": state(3.16, 5.27, 6.15, 54.95, 27.54, 6.92, 1.0, 3.23, 6.23, 2.47),
        },
    }


def params_validation():
    doc = params_default()
    doc["description"] = ("Variant with the route-validation delay spreads "
                          "(36.73 ns LoS, 48.08 ns NLoS) in place of the "
                          "characterization medians.")
    doc["states"]["los"]["ds_median_ns"] = 36.73
    doc["states"]["nlos"]["ds_median_ns"] = 48.08
    return doc


def write_panorama_and_annotations():
    rng = random.Random(220)
    w = h = SIZE
    dphi = 360.0 / w
    dtheta = 180.0 / h

    def jitter(c, sigma=8):
        return tuple(max(0, min(255, int(round(v + rng.gauss(0, sigma))))) for v in c)

    px = bytearray()
    foliage_px = []
    sign_px = []
    for ry in range(h):
        ey = h - 1 - ry  # raster row 0 is the image top
        el_c = ey * dtheta - 90.0
        for x in range(w):
            az_c = x * dphi - 180.0
            az_w, el_w = angles(mat_apply(ROT, unit(az_c, el_c)))
            if FOLIAGE_AZ[0] < az_w < FOLIAGE_AZ[1] and FOLIAGE_EL[0] < el_w < FOLIAGE_EL[1]:
                color = jitter(REF_COLOR)
                foliage_px.append((x, ry))
            elif FOLIAGE_AZ[0] < az_w < FOLIAGE_AZ[1] and SIGN_EL[0] < el_w < SIGN_EL[1]:
                color = jitter((69, 83, 196))
                sign_px.append((x, ry))
            elif el_w > 25.0:
                color = jitter((210, 225, 240), 4)   # sky, far from the tint
            else:
                color = jitter((120, 120, 118), 6)   # ground and facades
            px.extend(struct.pack("BBB", *color))

    with open(os.path.join(HERE, "panorama_demo.ppm"), "wb") as f:
        f.write(b"P6\n%d %d\n255\n" % (w, h))
        f.write(bytes(px))

    rng.shuffle(foliage_px)
    rng.shuffle(sign_px)
    with open(os.path.join(HERE, "labels_demo.csv"), "w") as f:
        f.write("pixel_x,pixel_y,class\n")
        for x, y in foliage_px[:300]:
            f.write(f"{x},{y},1\n")
        for x, y in sign_px[:160]:
            f.write(f"{x},{y},0\n")

    with open(os.path.join(HERE, "refs_demo.csv"), "w") as f:
        f.write("name,pixel_x,pixel_y,world_az_deg,world_el_deg\n")
        for i, (x, ry) in enumerate([(40, 60), (150, 300), (300, 128), (420, 400),
                                     (256, 220), (80, 460)]):
            ey = h - 1 - ry
            az_w, el_w = angles(mat_apply(ROT, unit(x * dphi - 180.0, ey * dtheta - 90.0)))
            f.write(f"ref{i},{x},{ry},{az_w!r},{el_w!r}\n")


def main():
    with open(os.path.join(HERE, "scene_campus.json"), "w") as f:
        json.dump(scene_campus(), f, indent=2)
        f.write("\n")
    with open(os.path.join(HERE, "params_default.json"), "w") as f:
        json.dump(params_default(), f, indent=2)
        f.write("\n")
    with open(os.path.join(HERE, "params_validation.json"), "w") as f:
        json.dump(params_validation(), f, indent=2)
        f.write("\n")
    with open(os.path.join(HERE, "route_42.csv"), "w") as f:
        f.write("x,y,z\n")
        for i in range(42):
            y = -140.0 + i * (340.0 / 41.0)
            f.write(f"60,{y!r},1.6\n")
    write_panorama_and_annotations()
    print("fixtures written to", HERE)


if __name__ == "__main__":
    main()
