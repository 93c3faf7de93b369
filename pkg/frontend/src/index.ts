export {parseTrace, loadTrace, extractSeries, TraceFormatError} from './schema';
export type {Trace, TraceRow, Series} from './schema';
export {buildFigure, PALETTE} from './figure';
export type {Figure, Shape, FigureOptions} from './figure';
export {renderSvg} from './svg';
export {renderPng} from './raster';
