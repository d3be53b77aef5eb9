/** Deterministic force-directed node layout for the snapshot panel. */

import { Graph } from "./graph.js";

/** mulberry32: tiny seeded PRNG, deterministic across platforms. */
export function mulberry32(seed: number): () => number {
    let a = seed >>> 0;
    return () => {
        a = (a + 0x6d2b79f5) >>> 0;
        let t = a;
        t = Math.imul(t ^ (t >>> 15), t | 1);
        t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
        return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
    };
}

export function forceLayout(
    graph: Graph, seed = 1337, iterations = 400,
): Array<[number, number]> {
    const n = graph.labels.length;
    const rand = mulberry32(seed);
    const pos: Array<[number, number]> = [];
    for (let i = 0; i < n; i++) {
        const angle = (2 * Math.PI * i) / n;
        pos.push([
            Math.cos(angle) + 0.1 * (rand() - 0.5),
            Math.sin(angle) + 0.1 * (rand() - 0.5),
        ]);
    }
    const k = Math.sqrt(4.0 / Math.max(n, 1)); // ideal edge length
    for (let iter = 0; iter < iterations; iter++) {
        const disp: Array<[number, number]> = pos.map(() => [0, 0]);
        for (let i = 0; i < n; i++) {
            for (let j = i + 1; j < n; j++) {
                let dx = pos[i][0] - pos[j][0];
                let dy = pos[i][1] - pos[j][1];
                let d = Math.hypot(dx, dy);
                if (d < 1e-9) { dx = 1e-4; dy = 0; d = 1e-4; }
                const f = (k * k) / d; // repulsion
                disp[i][0] += (dx / d) * f;
                disp[i][1] += (dy / d) * f;
                disp[j][0] -= (dx / d) * f;
                disp[j][1] -= (dy / d) * f;
            }
        }
        for (const [u, v] of graph.edges) {
            let dx = pos[u][0] - pos[v][0];
            let dy = pos[u][1] - pos[v][1];
            let d = Math.hypot(dx, dy);
            if (d < 1e-9) { dx = 1e-4; dy = 0; d = 1e-4; }
            const f = (d * d) / k; // attraction
            disp[u][0] -= (dx / d) * f;
            disp[u][1] -= (dy / d) * f;
            disp[v][0] += (dx / d) * f;
            disp[v][1] += (dy / d) * f;
        }
        const temp = 0.1 * (1 - iter / iterations) + 0.002;
        for (let i = 0; i < n; i++) {
            const d = Math.hypot(disp[i][0], disp[i][1]);
            if (d > 1e-12) {
                const step = Math.min(d, temp);
                pos[i][0] += (disp[i][0] / d) * step;
                pos[i][1] += (disp[i][1] / d) * step;
            }
        }
    }
    return pos;
}

/** Scale positions into a pixel viewport, preserving aspect ratio. */
export function fitToViewport(
    pos: Array<[number, number]>,
    width: number, height: number, pad: number,
): Array<[number, number]> {
    const xs = pos.map(p => p[0]);
    const ys = pos.map(p => p[1]);
    const xMin = Math.min(...xs), xMax = Math.max(...xs);
    const yMin = Math.min(...ys), yMax = Math.max(...ys);
    const scale = Math.min(
        (width - 2 * pad) / Math.max(xMax - xMin, 1e-9),
        (height - 2 * pad) / Math.max(yMax - yMin, 1e-9),
    );
    const cx = (xMin + xMax) / 2;
    const cy = (yMin + yMax) / 2;
    return pos.map(([x, y]) => [
        width / 2 + (x - cx) * scale,
        height / 2 + (y - cy) * scale,
    ]);
}
