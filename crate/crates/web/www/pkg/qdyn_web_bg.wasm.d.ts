/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_ecgrun_free: (a: number, b: number) => void;
export const __wbg_escapeimage_free: (a: number, b: number) => void;
export const ecg_run: (a: number, b: number, c: number, d: number) => [number, number, number];
export const ecgrun_beats: (a: number) => number;
export const ecgrun_beats_csv: (a: number) => [number, number];
export const ecgrun_mean_hr: (a: number) => number;
export const ecgrun_samples: (a: number) => [number, number];
export const escape_image: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const escapeimage_rgba: (a: number) => [number, number];
export const stability_text: (a: number, b: number, c: number) => [number, number, number, number];
export const escapeimage_white_fraction: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
