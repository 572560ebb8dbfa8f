//! Confusion pairs and the fixed unrelated sample used to calibrate and
//! check glyph similarity.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zhgec::phonosim::{GlyphModel, ShapeParams};

pub const CONFUSION_PAIRS: [(char, char); 5] = [('西', '四'), ('日', '目'), ('州', '洲'), ('己', '已'), ('进', '近')];

/// Characters drawn from for the unrelated pairs.
const POOL: &str = "的一是不了人我在有他这中大来上国个到说们为子和你地出道也时年得就那要下以生会自着去之过家学对可里后小么心多天而能好都然没日于起还发成事只作当想看文无开手十用主行方又如前所本见经头面公同三已老从动两长知民样现分将外但身些与高意进把法此实回二理美点月明其种声全工己话儿者向情部正名定女问力机给等几很业最间新什打便位因重被走电四第门相次东政海口使教西再平真听世气信北少关并内加化由却代军产入先山五太水万市眼体别处总才场师书比住员九笑性通目华报立马命张活难神数件安表原车白应路期叫死常提感金何更反合放做系计或司利受光王果亲界及今京务制解各任至清物台象记边共风战干接它许八特觉望直服毛林题建南度统色字请交爱让认算论百吃义科怎元社术结六功指思非流每青管夫连远资队跟带花快条院变联言权往展该领传近留红治决周保达办运武半候七必城父强步完革深区即求品士转量空甚众技轻程告江语英基派满式李息写呢识极令黄德收脸钱党倒未持音";


/// 100 fixed random pairs of distinct pool characters, none of them a
/// confusion pair.
pub fn unrelated_pairs() -> Vec<(char, char)> {
    let pool: Vec<char> = POOL.chars().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let mut out = Vec::new();
    while out.len() < 100 {
        let pick: Vec<&char> = pool.choose_multiple(&mut rng, 2).collect();
        let (a, b) = (*pick[0], *pick[1]);
        let known = CONFUSION_PAIRS.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b));
        if known || out.contains(&(a, b)) || out.contains(&(b, a)) {
            continue;
        }
        out.push((a, b));
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct Outcome {
    pub params: ShapeParams,
    pub min_confusion: f64,
    pub max_unrelated: f64,
    /// Pairs on the right side of their threshold, out of 105.
    pub satisfied: usize,
}

impl Outcome {
    pub fn margin(&self) -> f64 {
        self.min_confusion - self.max_unrelated
    }

    pub fn separates(&self) -> bool {
        self.min_confusion > 0.9 && self.max_unrelated < 0.5
    }
}

pub fn evaluate(model: &GlyphModel, unrelated: &[(char, char)]) -> Outcome {
    let min_confusion = CONFUSION_PAIRS.iter().map(|&(a, b)| model.char_similarity(a, b)).fold(f64::INFINITY, f64::min);
    let max_unrelated = unrelated.iter().map(|&(a, b)| model.char_similarity(a, b)).fold(0.0, f64::max);
    let satisfied = CONFUSION_PAIRS.iter().filter(|&&(a, b)| model.char_similarity(a, b) > 0.9).count()
        + unrelated.iter().filter(|&&(a, b)| model.char_similarity(a, b) < 0.5).count();
    Outcome { params: model.params(), min_confusion, max_unrelated, satisfied }
}
