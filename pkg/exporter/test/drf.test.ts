import { describe, expect, it } from 'vitest';

import {
  DrfFile,
  HEADER_BYTES,
  LAYER_RECORD_BYTES,
  decodeDrf,
  encodeDrf,
} from '../src/drf';

function sampleFile(): DrfFile {
  const layers = [];
  const table = [[1, 2], [3, 4], [5, 6], [7, 8], [9, 10]];
  for (let g = 0; g < 5; g++) {
    for (const layerId of table[g]) {
      const data = new Float32Array(4 * 3 * 2);
      for (let i = 0; i < data.length; i++) data[i] = layerId + i / 7;
      layers.push({ layerId, groupId: g + 1, height: 4, width: 3, channels: 2, data });
    }
  }
  return { backbone: 'toy', imageHeight: 32, imageWidth: 40, layers };
}

describe('drf encoding', () => {
  it('has the documented byte layout', () => {
    expect(HEADER_BYTES).toBe(20);
    expect(LAYER_RECORD_BYTES).toBe(17);
    // one 4x4x2 layer: 20 + 17 + 128 = 165 bytes
    const one: DrfFile = {
      backbone: 'toy',
      imageHeight: 4,
      imageWidth: 4,
      layers: [
        {
          layerId: 1,
          groupId: 1,
          height: 4,
          width: 4,
          channels: 2,
          data: new Float32Array(32),
        },
      ],
    };
    expect(encodeDrf(one).length).toBe(165);
  });

  it('writes little-endian header fields', () => {
    const buf = encodeDrf(sampleFile());
    expect(buf.toString('ascii', 0, 4)).toBe('DRF1');
    expect(buf.readUInt32LE(4)).toBe(3); // toy
    expect(buf.readUInt32LE(8)).toBe(32);
    expect(buf.readUInt32LE(12)).toBe(40);
    expect(buf.readUInt32LE(16)).toBe(10);
  });

  it('roundtrips bit-exactly', () => {
    const file = sampleFile();
    const back = decodeDrf(encodeDrf(file));
    expect(back.backbone).toBe('toy');
    expect(back.imageHeight).toBe(32);
    expect(back.layers.length).toBe(10);
    back.layers.forEach((layer, i) => {
      expect(layer.layerId).toBe(file.layers[i].layerId);
      expect(layer.groupId).toBe(file.layers[i].groupId);
      expect(Array.from(layer.data)).toEqual(Array.from(file.layers[i].data));
    });
  });

  it('rejects payload size mismatches', () => {
    const file = sampleFile();
    file.layers[0].data = new Float32Array(3);
    expect(() => encodeDrf(file)).toThrow(/payload length/);
  });

  it('rejects bad magic', () => {
    const buf = encodeDrf(sampleFile());
    buf.write('XXXX', 0, 'ascii');
    expect(() => decodeDrf(buf)).toThrow(/magic/);
  });
});
