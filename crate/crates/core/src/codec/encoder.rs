use alloc::vec::Vec;

use super::leaf::{leaf_references, leaf_taps, predict_leaf, rdpcm_direction};
use super::order::{BlockRect, CodingOrder, FrameView};
use super::stats::EncodeStats;
use super::stream::{write_tables, Bitstream, StreamHeader, VERSION_EMBEDDED_TABLES, VERSION_SHIPPED_TABLES};
use super::{CodecConfig, CodecError, PredictorFamily, MIN_BLOCK};
use crate::entropy::{BitWriter, ContextSet, RiceCoder};
use crate::plane::Plane;
use crate::prediction::{rdpcm_forward, IntraMode};

/// Bits of the flat mode code sent per leaf.
pub const MODE_BITS: u64 = 6;

/// Residual coder of a family. RDPCM differences span twice the sample
/// range and need one more escape bit.
pub(crate) fn residual_coder(family: PredictorFamily, bit_depth: u8) -> RiceCoder {
    match family {
        PredictorFamily::BlockRdpcm => RiceCoder::with_escape_bits(bit_depth as u32 + 2),
        _ => RiceCoder::new(bit_depth),
    }
}

#[inline]
pub(crate) fn padded_dims(width: usize, height: usize) -> (usize, usize) {
    (width.next_multiple_of(MIN_BLOCK), height.next_multiple_of(MIN_BLOCK))
}

/// A leaf with its chosen mode and coded residuals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafChoice {
    pub mode: IntraMode,
    /// Residuals in raster order as they are entropy coded (after RDPCM).
    pub residuals: Vec<i32>,
    /// Mode code plus residual bits.
    pub bits: u64,
    /// Sum of squared prediction errors before any RDPCM.
    pub sse: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeContent {
    Leaf(LeafChoice),
    /// In-frame children in z-order.
    Split(Vec<QuadTreeNode>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadTreeNode {
    pub x: usize,
    pub y: usize,
    pub size: usize,
    pub content: NodeContent,
}

impl QuadTreeNode {
    pub fn rect(&self) -> BlockRect {
        BlockRect::new(self.x, self.y, self.size)
    }

    pub fn is_split(&self) -> bool {
        matches!(self.content, NodeContent::Split(_))
    }

    pub fn leaf(&self) -> Option<&LeafChoice> {
        match &self.content {
            NodeContent::Leaf(l) => Some(l),
            NodeContent::Split(_) => None,
        }
    }

    pub fn children(&self) -> &[QuadTreeNode] {
        match &self.content {
            NodeContent::Leaf(_) => &[],
            NodeContent::Split(c) => c,
        }
    }

    /// Visits leaves in coding order.
    pub fn for_each_leaf<'a>(&'a self, f: &mut impl FnMut(&'a QuadTreeNode, &'a LeafChoice)) {
        match &self.content {
            NodeContent::Leaf(l) => f(self, l),
            NodeContent::Split(c) => c.iter().for_each(|n| n.for_each_leaf(f)),
        }
    }

    pub fn leaf_count(&self) -> usize {
        let mut n = 0;
        self.for_each_leaf(&mut |_, _| n += 1);
        n
    }
}

/// Outcome of a partition search over one node.
#[derive(Debug, Clone)]
pub struct Partition {
    pub node: QuadTreeNode,
    /// Split flags, mode codes and residual bits of the subtree.
    pub bits: u64,
    /// Residual contexts after coding the subtree.
    pub contexts: ContextSet,
}

/// Mode and partition search over one (padded) plane.
pub struct Encoder<'a> {
    plane: &'a Plane,
    order: CodingOrder,
    config: &'a CodecConfig,
    coder: RiceCoder,
}

impl<'a> Encoder<'a> {
    /// `plane` must already be padded to multiples of 4.
    pub fn new(plane: &'a Plane, config: &'a CodecConfig) -> Result<Self, CodecError> {
        config.validate()?;
        if plane.width() % MIN_BLOCK != 0 || plane.height() % MIN_BLOCK != 0 {
            return Err(CodecError::InvalidConfig("encoder plane must be padded to multiples of 4"));
        }
        Ok(Encoder {
            plane,
            order: CodingOrder::new(plane.width(), plane.height(), config.ctu_size),
            config,
            coder: residual_coder(config.family, plane.bit_depth()),
        })
    }

    pub fn order(&self) -> &CodingOrder {
        &self.order
    }

    pub fn coder(&self) -> &RiceCoder {
        &self.coder
    }

    fn view(&self, block: BlockRect) -> FrameView<'_> {
        FrameView::new(self.plane.samples(), &self.order, block, self.plane.bit_depth())
    }

    fn evaluate(
        &self,
        view: &FrameView<'_>,
        refs: &crate::prediction::ReferenceArray,
        block: BlockRect,
        mode: IntraMode,
        contexts: &ContextSet,
    ) -> LeafChoice {
        let pred = predict_leaf(view, refs, block, mode, self.config);
        let n = block.size;
        let mut residuals = Vec::with_capacity(n * n);
        let mut sse = 0u64;
        for dy in 0..n {
            let row = &self.plane.samples()[(block.y + dy) * self.plane.width() + block.x..][..n];
            for (dx, &o) in row.iter().enumerate() {
                let r = o as i32 - pred[dy * n + dx] as i32;
                sse += (r * r) as u64;
                residuals.push(r);
            }
        }
        if let Some(dir) = rdpcm_direction(self.config.family, mode) {
            rdpcm_forward(&mut residuals, n, dir);
        }
        let bits = MODE_BITS + self.coder.measure_bits(&residuals, contexts.get(mode, n));
        LeafChoice {
            mode,
            residuals,
            bits,
            sse,
        }
    }

    /// Codes `block` as a leaf with a given mode.
    pub fn leaf_with_mode(&self, block: BlockRect, mode: IntraMode, contexts: &ContextSet) -> LeafChoice {
        let view = self.view(block);
        let refs = leaf_references(&view, block);
        self.evaluate(&view, &refs, block, mode, contexts)
    }

    /// Cheapest mode for `block` as a leaf. Ties go to the lower mode index.
    pub fn choose_leaf_mode(&self, block: BlockRect, contexts: &ContextSet) -> LeafChoice {
        let view = self.view(block);
        let refs = leaf_references(&view, block);
        if let Some(mode) = self.config.forced_mode {
            return self.evaluate(&view, &refs, block, mode, contexts);
        }
        let mut best: Option<LeafChoice> = None;
        for mode in IntraMode::all() {
            let c = self.evaluate(&view, &refs, block, mode, contexts);
            if best.as_ref().is_none_or(|b| c.bits < b.bits) {
                best = Some(c);
            }
        }
        best.expect("at least one mode")
    }

    fn advance(&self, contexts: &mut ContextSet, leaf: &LeafChoice, size: usize) {
        let ctx = contexts.get_mut(leaf.mode, size);
        for &r in &leaf.residuals {
            self.coder.cost(r, ctx);
        }
    }

    /// Split flag is present on the stream for this node.
    #[inline]
    pub fn signals_split(&self, block: &BlockRect) -> bool {
        block.size > MIN_BLOCK && self.order.fits(block)
    }

    /// Bottom-up partition search. Returns `None` for nodes outside the
    /// frame. Ties keep the unsplit leaf.
    pub fn choose_partition(&self, block: BlockRect, contexts: &ContextSet) -> Option<Partition> {
        if !self.order.in_frame(block.x, block.y) {
            return None;
        }
        let fits = self.order.fits(&block);
        let flag_bits = self.signals_split(&block) as u64;
        let pu = self.config.pu_sizes;
        let can_leaf = fits && (pu.contains(block.size) || !pu.any_below(block.size));
        let can_split = block.size > MIN_BLOCK && (!fits || pu.any_below(block.size));

        let leaf = can_leaf.then(|| {
            let choice = self.choose_leaf_mode(block, contexts);
            let mut after = *contexts;
            self.advance(&mut after, &choice, block.size);
            Partition {
                bits: flag_bits + choice.bits,
                node: QuadTreeNode {
                    x: block.x,
                    y: block.y,
                    size: block.size,
                    content: NodeContent::Leaf(choice),
                },
                contexts: after,
            }
        });
        let split = can_split.then(|| {
            let mut ctx = *contexts;
            let mut bits = flag_bits;
            let mut children = Vec::with_capacity(4);
            for q in block.quadrants() {
                if let Some(p) = self.choose_partition(q, &ctx) {
                    bits += p.bits;
                    ctx = p.contexts;
                    children.push(p.node);
                }
            }
            Partition {
                node: QuadTreeNode {
                    x: block.x,
                    y: block.y,
                    size: block.size,
                    content: NodeContent::Split(children),
                },
                bits,
                contexts: ctx,
            }
        });
        match (leaf, split) {
            (Some(l), Some(s)) => Some(if l.bits <= s.bits { l } else { s }),
            (l, s) => l.or(s),
        }
    }

    fn emit_flags(&self, node: &QuadTreeNode, w: &mut BitWriter) {
        if self.signals_split(&node.rect()) {
            w.write_bit(node.is_split());
        }
        for c in node.children() {
            self.emit_flags(c, w);
        }
    }

    fn emit_leaves(&self, node: &QuadTreeNode, contexts: &mut ContextSet, w: &mut BitWriter) {
        node.for_each_leaf(&mut |n, leaf| {
            w.write_bits(leaf.mode.index() as u32, MODE_BITS as u32);
            let ctx = contexts.get_mut(leaf.mode, n.size);
            for &r in &leaf.residuals {
                self.coder.encode(r, ctx, w);
            }
        });
    }
}

/// Everything produced by one encode.
#[derive(Debug, Clone)]
pub struct Encoded {
    pub stream: Bitstream,
    pub stats: EncodeStats,
    /// One tree per CTU in coding order.
    pub trees: Vec<QuadTreeNode>,
    /// The plane actually coded (input padded to multiples of 4).
    pub padded: Plane,
}

impl Encoded {
    /// Calls `f(mode, block_size, original, taps)` for every pixel of every
    /// leaf, with the 3-tap neighbours of the leaf's mode under `config`.
    pub fn visit_leaf_taps(
        &self,
        config: &CodecConfig,
        mut f: impl FnMut(IntraMode, usize, u16, [u16; 3]),
    ) {
        let order = CodingOrder::new(self.padded.width(), self.padded.height(), config.ctu_size);
        for tree in &self.trees {
            tree.for_each_leaf(&mut |node, leaf| {
                let block = node.rect();
                let view = FrameView::new(self.padded.samples(), &order, block, self.padded.bit_depth());
                leaf_taps(&view, block, leaf.mode, &config.neighbors, |x, y, taps| {
                    f(leaf.mode, block.size, self.padded.get(x, y), taps)
                });
            });
        }
    }
}

/// Encodes one plane; see [`encode_plane_detailed`].
pub fn encode_plane(plane: &Plane, config: &CodecConfig) -> Result<(Bitstream, EncodeStats), CodecError> {
    let e = encode_plane_detailed(plane, config)?;
    Ok((e.stream, e.stats))
}

/// Encodes one plane, keeping the chosen trees for analysis.
pub fn encode_plane_detailed(plane: &Plane, config: &CodecConfig) -> Result<Encoded, CodecError> {
    config.validate()?;
    let (width, height) = (plane.width(), plane.height());
    if width > u16::MAX as usize || height > u16::MAX as usize {
        return Err(CodecError::TooLarge { width, height });
    }
    let (pw, ph) = padded_dims(width, height);
    let padded = if (pw, ph) == (width, height) {
        plane.clone()
    } else {
        plane.pad_to(pw, ph)
    };
    let encoder = Encoder::new(&padded, config)?;

    let custom = config.has_custom_tables();
    let header = StreamHeader {
        version: if custom {
            VERSION_EMBEDDED_TABLES
        } else {
            VERSION_SHIPPED_TABLES
        },
        width: width as u16,
        height: height as u16,
        bit_depth: plane.bit_depth(),
        family: config.family,
        ctu_log2: config.ctu_size.trailing_zeros() as u8,
    };
    let mut w = BitWriter::new();
    header.write(&mut w);
    if custom {
        write_tables(&mut w, &config.weights, &config.neighbors);
    }
    let header_bits = w.bit_len();

    let mut contexts = ContextSet::new();
    let mut trees = Vec::new();
    let mut flag_bits = 0;
    for ctu in encoder.order().ctus() {
        let part = encoder
            .choose_partition(ctu, &contexts)
            .expect("every CTU origin lies inside the frame");
        let start = w.bit_len();
        encoder.emit_flags(&part.node, &mut w);
        flag_bits += w.bit_len() - start;
        encoder.emit_leaves(&part.node, &mut contexts, &mut w);
        debug_assert_eq!(contexts, part.contexts);
        debug_assert_eq!(w.bit_len() - start, part.bits);
        trees.push(part.node);
    }

    let mut stats = EncodeStats::from_trees(&trees);
    stats.total_bits = w.bit_len();
    stats.header_bits = header_bits;
    stats.split_flag_bits = flag_bits;
    stats.pixels = (pw * ph) as u64;
    Ok(Encoded {
        stream: Bitstream::from_bytes(w.finish()),
        stats,
        trees,
        padded,
    })
}
