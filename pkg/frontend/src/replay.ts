/** Reconstruct node states from an event log. */

import { EventRow } from "./csv.js";

export interface NodeStates {
    infected: boolean[];
    treated: boolean[];
}

/**
 * Replay a run's event log (which starts with the initial infections as
 * I-rows at t = 0) up to and including time t.
 */
export function statesAt(events: EventRow[], nodeCount: number,
                         t: number): NodeStates {
    const infected = new Array<boolean>(nodeCount).fill(false);
    const treated = new Array<boolean>(nodeCount).fill(false);
    for (const ev of events) {
        if (ev.t > t) break;
        if (ev.kind === "I") {
            infected[ev.node] = true;
        } else if (ev.kind === "R") {
            infected[ev.node] = false;
            treated[ev.node] = false;
        } else {
            treated[ev.node] = true;
        }
    }
    return { infected, treated };
}

/** Time at which the number of nodes under treatment peaks (first peak). */
export function timeOfMaxTreated(events: EventRow[],
                                 nodeCount: number): number {
    const treated = new Array<boolean>(nodeCount).fill(false);
    let count = 0;
    let best = 0;
    let bestTime = events.length ? events[0].t : 0;
    for (const ev of events) {
        if (ev.kind === "T" && !treated[ev.node]) {
            treated[ev.node] = true;
            count++;
        } else if (ev.kind === "R" && treated[ev.node]) {
            treated[ev.node] = false;
            count--;
        }
        if (count > best) {
            best = count;
            bestTime = ev.t;
        }
    }
    return bestTime;
}
