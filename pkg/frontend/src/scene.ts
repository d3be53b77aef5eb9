/**
 * Display-list scene: panels emit primitives once, and the scene renders
 * to SVG (vector) or to a PNG rasterization of the same shapes.
 */

import { deflateSync } from "node:zlib";

export type Primitive =
    | { kind: "line"; x1: number; y1: number; x2: number; y2: number;
        stroke: string; width: number; dash?: string }
    | { kind: "polyline"; points: Array<[number, number]>; stroke: string;
        width: number }
    | { kind: "polygon"; points: Array<[number, number]>; fill: string;
        opacity: number }
    | { kind: "circle"; cx: number; cy: number; r: number; fill: string;
        stroke?: string }
    | { kind: "rect"; x: number; y: number; w: number; h: number; fill: string }
    | { kind: "text"; x: number; y: number; s: string; size: number;
        anchor: "start" | "middle" | "end"; fill: string };

export class Scene {
    readonly width: number;
    readonly height: number;
    readonly items: Primitive[] = [];

    constructor(width: number, height: number) {
        this.width = width;
        this.height = height;
        this.items.push({ kind: "rect", x: 0, y: 0, w: width, h: height,
                          fill: "#ffffff" });
    }

    add(item: Primitive): void {
        this.items.push(item);
    }
}

const round = (v: number) => Math.round(v * 100) / 100;

export function toSvg(scene: Scene): string {
    const parts: string[] = [];
    parts.push(
        `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width}" ` +
        `height="${scene.height}" viewBox="0 0 ${scene.width} ${scene.height}">`,
    );
    for (const it of scene.items) {
        switch (it.kind) {
            case "rect":
                parts.push(`<rect x="${round(it.x)}" y="${round(it.y)}" ` +
                    `width="${round(it.w)}" height="${round(it.h)}" fill="${it.fill}"/>`);
                break;
            case "line": {
                const dash = it.dash ? ` stroke-dasharray="${it.dash}"` : "";
                parts.push(`<line x1="${round(it.x1)}" y1="${round(it.y1)}" ` +
                    `x2="${round(it.x2)}" y2="${round(it.y2)}" stroke="${it.stroke}" ` +
                    `stroke-width="${it.width}"${dash}/>`);
                break;
            }
            case "polyline": {
                const pts = it.points.map(p => `${round(p[0])},${round(p[1])}`).join(" ");
                parts.push(`<polyline points="${pts}" fill="none" ` +
                    `stroke="${it.stroke}" stroke-width="${it.width}"/>`);
                break;
            }
            case "polygon": {
                const pts = it.points.map(p => `${round(p[0])},${round(p[1])}`).join(" ");
                parts.push(`<polygon points="${pts}" fill="${it.fill}" ` +
                    `fill-opacity="${it.opacity}" stroke="none"/>`);
                break;
            }
            case "circle": {
                const stroke = it.stroke
                    ? ` stroke="${it.stroke}" stroke-width="1"` : "";
                parts.push(`<circle cx="${round(it.cx)}" cy="${round(it.cy)}" ` +
                    `r="${round(it.r)}" fill="${it.fill}"${stroke}/>`);
                break;
            }
            case "text":
                parts.push(`<text x="${round(it.x)}" y="${round(it.y)}" ` +
                    `font-family="sans-serif" font-size="${it.size}" ` +
                    `text-anchor="${it.anchor}" fill="${it.fill}">${escapeXml(it.s)}</text>`);
                break;
        }
    }
    parts.push("</svg>");
    return parts.join("\n");
}

function escapeXml(s: string): string {
    return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

// ---------------------------------------------------------------- raster --

function parseColor(color: string): [number, number, number] {
    if (color.startsWith("#")) {
        const hex = color.slice(1);
        const full = hex.length === 3
            ? hex.split("").map(c => c + c).join("") : hex;
        return [
            parseInt(full.slice(0, 2), 16),
            parseInt(full.slice(2, 4), 16),
            parseInt(full.slice(4, 6), 16),
        ];
    }
    return [0, 0, 0];
}

class Raster {
    readonly w: number;
    readonly h: number;
    readonly data: Uint8Array;

    constructor(w: number, h: number) {
        this.w = w;
        this.h = h;
        this.data = new Uint8Array(w * h * 4).fill(255);
    }

    set(x: number, y: number, rgb: [number, number, number], alpha = 1): void {
        if (x < 0 || y < 0 || x >= this.w || y >= this.h) return;
        const o = (y * this.w + x) * 4;
        for (let c = 0; c < 3; c++) {
            this.data[o + c] = Math.round(
                rgb[c] * alpha + this.data[o + c] * (1 - alpha));
        }
        this.data[o + 3] = 255;
    }

    fillPolygon(points: Array<[number, number]>, rgb: [number, number, number],
                alpha: number): void {
        const ys = points.map(p => p[1]);
        const y0 = Math.max(0, Math.floor(Math.min(...ys)));
        const y1 = Math.min(this.h - 1, Math.ceil(Math.max(...ys)));
        for (let y = y0; y <= y1; y++) {
            const xs: number[] = [];
            for (let i = 0; i < points.length; i++) {
                const [ax, ay] = points[i];
                const [bx, by] = points[(i + 1) % points.length];
                if ((ay <= y && by > y) || (by <= y && ay > y)) {
                    xs.push(ax + ((y - ay) / (by - ay)) * (bx - ax));
                }
            }
            xs.sort((a, b) => a - b);
            for (let k = 0; k + 1 < xs.length; k += 2) {
                const xa = Math.max(0, Math.round(xs[k]));
                const xb = Math.min(this.w - 1, Math.round(xs[k + 1]));
                for (let x = xa; x <= xb; x++) this.set(x, y, rgb, alpha);
            }
        }
    }

    strokeSegment(x1: number, y1: number, x2: number, y2: number,
                  rgb: [number, number, number], width: number): void {
        const dx = x2 - x1;
        const dy = y2 - y1;
        const len = Math.hypot(dx, dy);
        if (len === 0) return;
        const nx = (-dy / len) * (width / 2);
        const ny = (dx / len) * (width / 2);
        this.fillPolygon(
            [[x1 + nx, y1 + ny], [x2 + nx, y2 + ny],
             [x2 - nx, y2 - ny], [x1 - nx, y1 - ny]], rgb, 1);
    }

    fillCircle(cx: number, cy: number, r: number,
               rgb: [number, number, number]): void {
        for (let y = Math.floor(cy - r); y <= Math.ceil(cy + r); y++) {
            for (let x = Math.floor(cx - r); x <= Math.ceil(cx + r); x++) {
                if ((x - cx) ** 2 + (y - cy) ** 2 <= r * r) {
                    this.set(x, y, rgb, 1);
                }
            }
        }
    }
}

const CRC_TABLE = (() => {
    const table = new Uint32Array(256);
    for (let n = 0; n < 256; n++) {
        let c = n;
        for (let k = 0; k < 8; k++) {
            c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
        }
        table[n] = c >>> 0;
    }
    return table;
})();

function crc32(buf: Uint8Array): number {
    let c = 0xffffffff;
    for (const b of buf) {
        c = CRC_TABLE[(c ^ b) & 0xff] ^ (c >>> 8);
    }
    return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Uint8Array): Buffer {
    const head = Buffer.alloc(8);
    head.writeUInt32BE(data.length, 0);
    head.write(type, 4, "ascii");
    const body = Buffer.concat([Buffer.from(type, "ascii"), Buffer.from(data)]);
    const crc = Buffer.alloc(4);
    crc.writeUInt32BE(crc32(body), 0);
    return Buffer.concat([head, Buffer.from(data), crc]);
}

export function toPng(scene: Scene): Buffer {
    const raster = new Raster(scene.width, scene.height);
    for (const it of scene.items) {
        switch (it.kind) {
            case "rect":
                raster.fillPolygon(
                    [[it.x, it.y], [it.x + it.w, it.y],
                     [it.x + it.w, it.y + it.h], [it.x, it.y + it.h]],
                    parseColor(it.fill), 1);
                break;
            case "line":
                raster.strokeSegment(it.x1, it.y1, it.x2, it.y2,
                    parseColor(it.stroke), it.width);
                break;
            case "polyline":
                for (let i = 0; i + 1 < it.points.length; i++) {
                    raster.strokeSegment(
                        it.points[i][0], it.points[i][1],
                        it.points[i + 1][0], it.points[i + 1][1],
                        parseColor(it.stroke), it.width);
                }
                break;
            case "polygon":
                raster.fillPolygon(it.points, parseColor(it.fill), it.opacity);
                break;
            case "circle":
                raster.fillCircle(it.cx, it.cy, it.r, parseColor(it.fill));
                break;
            case "text":
                break; // labels are vector-only
        }
    }
    const { w, h, data } = raster;
    const scanlines = Buffer.alloc(h * (w * 4 + 1));
    for (let y = 0; y < h; y++) {
        scanlines[y * (w * 4 + 1)] = 0; // filter: none
        Buffer.from(data.buffer, y * w * 4, w * 4)
            .copy(scanlines, y * (w * 4 + 1) + 1);
    }
    const ihdr = Buffer.alloc(13);
    ihdr.writeUInt32BE(w, 0);
    ihdr.writeUInt32BE(h, 4);
    ihdr[8] = 8;  // bit depth
    ihdr[9] = 6;  // RGBA
    return Buffer.concat([
        Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
        chunk("IHDR", ihdr),
        chunk("IDAT", deflateSync(scanlines)),
        chunk("IEND", new Uint8Array(0)),
    ]);
}
