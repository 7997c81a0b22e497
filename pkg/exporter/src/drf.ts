/**
 * DRF binary feature interchange format (little-endian).
 *
 * magic "DRF1" | backbone u32 | imageHeight u32 | imageWidth u32 |
 * layerCount u32 | per layer: layerId u32, groupId u8, H u32, W u32,
 * C u32, payload H*W*C float32 (row-major, channels fastest).
 */

export type BackboneId = 'vgg16' | 'vgg19' | 'mobilenetv2' | 'toy';

export const BACKBONE_CODES: Record<BackboneId, number> = {
  vgg16: 0,
  vgg19: 1,
  mobilenetv2: 2,
  toy: 3,
};

export interface DrfLayer {
  layerId: number;
  groupId: number;
  height: number;
  width: number;
  channels: number;
  data: Float32Array; // length = height * width * channels
}

export interface DrfFile {
  backbone: BackboneId;
  imageHeight: number;
  imageWidth: number;
  layers: DrfLayer[];
}

const MAGIC = 'DRF1';
export const HEADER_BYTES = 20;
export const LAYER_RECORD_BYTES = 17;

export function encodeDrf(file: DrfFile): Buffer {
  let total = HEADER_BYTES;
  for (const layer of file.layers) {
    const n = layer.height * layer.width * layer.channels;
    if (layer.data.length !== n) {
      throw new Error(`layer ${layer.layerId}: payload length ${layer.data.length} != ${n}`);
    }
    total += LAYER_RECORD_BYTES + 4 * n;
  }
  const buf = Buffer.alloc(total);
  buf.write(MAGIC, 0, 'ascii');
  buf.writeUInt32LE(BACKBONE_CODES[file.backbone], 4);
  buf.writeUInt32LE(file.imageHeight, 8);
  buf.writeUInt32LE(file.imageWidth, 12);
  buf.writeUInt32LE(file.layers.length, 16);
  let off = HEADER_BYTES;
  for (const layer of file.layers) {
    buf.writeUInt32LE(layer.layerId, off);
    buf.writeUInt8(layer.groupId, off + 4);
    buf.writeUInt32LE(layer.height, off + 5);
    buf.writeUInt32LE(layer.width, off + 9);
    buf.writeUInt32LE(layer.channels, off + 13);
    off += LAYER_RECORD_BYTES;
    for (let i = 0; i < layer.data.length; i++) {
      buf.writeFloatLE(layer.data[i], off + 4 * i);
    }
    off += 4 * layer.data.length;
  }
  return buf;
}

export function decodeDrf(buf: Buffer): DrfFile {
  if (buf.toString('ascii', 0, 4) !== MAGIC) {
    throw new Error('bad magic');
  }
  const code = buf.readUInt32LE(4);
  const backbone = (Object.keys(BACKBONE_CODES) as BackboneId[]).find(
    (k) => BACKBONE_CODES[k] === code,
  );
  if (backbone === undefined) {
    throw new Error(`unknown backbone code ${code}`);
  }
  const imageHeight = buf.readUInt32LE(8);
  const imageWidth = buf.readUInt32LE(12);
  const layerCount = buf.readUInt32LE(16);
  const layers: DrfLayer[] = [];
  let off = HEADER_BYTES;
  for (let i = 0; i < layerCount; i++) {
    const layerId = buf.readUInt32LE(off);
    const groupId = buf.readUInt8(off + 4);
    const height = buf.readUInt32LE(off + 5);
    const width = buf.readUInt32LE(off + 9);
    const channels = buf.readUInt32LE(off + 13);
    off += LAYER_RECORD_BYTES;
    const n = height * width * channels;
    if (off + 4 * n > buf.length) {
      throw new Error(`truncated payload in layer ${layerId}`);
    }
    const data = new Float32Array(n);
    for (let j = 0; j < n; j++) {
      data[j] = buf.readFloatLE(off + 4 * j);
    }
    off += 4 * n;
    layers.push({ layerId, groupId, height, width, channels, data });
  }
  return { backbone, imageHeight, imageWidth, layers };
}
