import { readFileSync } from "node:fs";

export interface Graph {
    labels: string[];
    edges: Array<[number, number]>;
}

/**
 * Edge-list format of the simulation package: two whitespace-separated
 * endpoints per line, '#' comments, labels mapped to dense indices in
 * first-appearance order (matching the indices used in the event logs).
 */
export function parseEdgeList(text: string): Graph {
    const labels: string[] = [];
    const index = new Map<string, number>();
    const seen = new Set<string>();
    const edges: Array<[number, number]> = [];
    for (const raw of text.split(/\r?\n/)) {
        const line = raw.split("#", 1)[0].trim();
        if (!line) continue;
        const parts = line.split(/\s+/);
        if (parts.length !== 2) {
            throw new Error(`bad edge line: '${raw}'`);
        }
        for (const label of parts) {
            if (!index.has(label)) {
                index.set(label, labels.length);
                labels.push(label);
            }
        }
        const u = index.get(parts[0])!;
        const v = index.get(parts[1])!;
        const key = u < v ? `${u},${v}` : `${v},${u}`;
        if (u !== v && !seen.has(key)) {
            seen.add(key);
            edges.push(u < v ? [u, v] : [v, u]);
        }
    }
    return { labels, edges };
}

export function readEdgeList(path: string): Graph {
    return parseEdgeList(readFileSync(path, "utf-8"));
}
